#pragma once

#include <optional>
#include <vector>

#include "witnesskit/channel.hpp"
#include "witnesskit/sdp.hpp"
#include "witnesskit/witness.hpp"

namespace witnesskit {

/// Verdicts with slack at most this are compatible.
inline constexpr double kCompatibilityDecisionTol = 1e-7;
/// Slacks inside (decision tol, this] are reported as inconclusive.
inline constexpr double kCompatibilityInconclusiveBand = 1e-5;

/// One scalarized margin constraint of the joint-channel program: the
/// functional Φ ↦ tr( (in_basis ⊗ out_basis) · choi_{margin}[in_block, out_block] )
/// of the stated margin. The program relaxes each such row of both margins
/// by a common slack, and the dual multipliers reported in
/// CompatibilityVerdict are indexed by this enumeration.
struct MarginRow {
  int margin;  // 1 or 2
  int in_block;
  int out_block;
  HermitianMatrix in_basis;
  HermitianMatrix out_basis;
};

/// Fixed enumeration of the margin rows for channels A → B1, A → B2.
std::vector<MarginRow> margin_rows(const Algebra& in, const Algebra& out1, const Algebra& out2);

struct CompatibilityVerdict {
  bool compatible = false;
  bool inconclusive = false;  // slack inside the hysteresis band
  double slack = 0.0;         // minimal uniform margin deviation e*
  std::optional<Channel> joint;
  std::vector<double> margin_multipliers;  // dual λ per margin row
  double dual_offset = 0.0;                // unitality-row dual contribution
  int solver_iterations = 0;
  double solver_gap = 0.0;
};

/// Decides whether the channels are the two margins of one joint channel,
/// by minimizing the uniform margin deviation over all joint channels.
CompatibilityVerdict check_compatibility(const Channel& c1, const Channel& c2,
                                         double decision_tol = kCompatibilityDecisionTol);

/// Guessing probability of the task when the two branches use the given
/// (not necessarily compatible) processing channels.
double p_prior_given(const Channel& c1, const Channel& c2, const DiscriminationTask& t);

/// Optimal guessing probability with preprocessing information: each
/// branch optimizes its channel separately.
double p_prior(const DiscriminationTask& t);

/// Optimal guessing probability with postprocessing information: one
/// joint channel serves both branches.
double p_post(const DiscriminationTask& t);

struct CompatibleOptimum {
  double min_value = 0.0;  // minimum of the witness over compatible pairs
  Channel margin1;
  Channel margin2;
};

/// Minimizes the affine functional over all compatible pairs.
CompatibleOptimum max_over_compatible(const WitnessForm& w);

/// Branch programs of p_prior run concurrently when set above 1.
void set_parallel_jobs(int jobs);

}  // namespace witnesskit
