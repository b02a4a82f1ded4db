#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "witnesskit/channel.hpp"

namespace witnesskit {

/// Thrown when a constructed object fails its re-verification contract.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values strictly below this count as detection; above is solver noise.
inline constexpr double kDetectionThreshold = -1e-9;

/// One tensor term of the linear part: the functional
/// (Φ_1, Φ_2) ↦ ⟨Φ_i(state), observable⟩ in slot i.
struct WitnessTerm {
  StateFunctional state;      // selfadjoint functional on the input algebra
  AlgebraElement observable;  // selfadjoint element of the slot's output algebra
};

/// Affine functional on channel pairs,
///   W(Φ_1, Φ_2) = offset − Σ_i Σ_t ⟨Φ_i(state_t), observable_t⟩.
/// An incompatibility witness is such a functional that is nonnegative on
/// every compatible pair and negative somewhere; tight means its minimum
/// over compatible pairs is zero.
struct WitnessForm {
  Algebra input;  // common input algebra of both slots
  Algebra out1;
  Algebra out2;
  double offset = 0.0;
  std::vector<WitnessTerm> terms1;
  std::vector<WitnessTerm> terms2;

  void validate() const;
};

/// State discrimination with intermediate partition information: a label
/// is drawn from labels1 ∪ labels2 with the ensemble's weights, the
/// matching state is sent through a channel pair, and the branch readout
/// guesses the label.
struct DiscriminationTask {
  Algebra input;
  std::vector<std::string> labels1;
  std::vector<std::string> labels2;
  StateEnsemble ensemble;  // on labels1 ∪ labels2
  Measurement readout1;    // outcomes labels1
  Measurement readout2;    // outcomes labels2

  void validate() const;
};

double evaluate(const WitnessForm& w, const Channel& c1, const Channel& c2);
bool detects(const WitnessForm& w, const Channel& c1, const Channel& c2);

WitnessForm scale_witness(const WitnessForm& w, double factor);

/// Shifts the offset by the minimum over compatible pairs, making the
/// witness tight; any detection of the input is preserved.
WitnessForm tighten(const WitnessForm& w);

struct WitnessTaskConversion {
  DiscriminationTask task;
  double alpha = 0.0;  // positive scale in W = alpha·(delta − P_guess)
  double delta = 0.0;  // guessing-probability threshold
};

/// Realizes the witness as a discrimination task over the given
/// informationally complete readouts with disjoint labels, such that
/// W(Φ) = alpha · [delta − P_guess(Φ ‖ task)] identically.
WitnessTaskConversion task_from_witness(const WitnessForm& w, const Measurement& m1,
                                        const Measurement& m2);

/// The tight witness associated with a task whose optimal guessing
/// probability with prior information strictly exceeds the posterior one.
WitnessForm witness_from_task(const DiscriminationTask& t);

/// Separating witness for an incompatible pair, assembled from the dual
/// multipliers of the compatibility program and re-verified (tightened,
/// sampled nonnegativity on compatible pairs, detection of the input pair).
WitnessForm witness_from_incompatible_pair(const Channel& c1, const Channel& c2,
                                           std::uint64_t seed = kDefaultSeed);

/// Composes the given slot with the readout of a projective measurement,
/// turning a witness with a classical slot into one with a quantum slot.
/// Tightness is preserved.
WitnessForm lift_witness(const WitnessForm& w, const Measurement& projective, int slot = 2);

}  // namespace witnesskit
