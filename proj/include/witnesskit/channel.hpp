#pragma once

#include <vector>

#include "witnesskit/algebra.hpp"

namespace witnesskit {

/// Channel between block algebras, stored in Choi form.
///
/// For the Schrödinger component Φ_{ji} mapping input block i into output
/// block j, the stored block is choi[i,j] = Σ_{u,v} E_uv ⊗ Φ_{ji}(E_uv) on
/// C^{n_i} ⊗ C^{m_j} (input factor first). Consequences used throughout:
///   action    ⟨Φ(a), B⟩ = Σ_{i,j} tr( choi[i,j] · (a_iᵀ ⊗ B_j) )
///   CP        ⇔ every block is positive semidefinite
///   unitality ⇔ Σ_j Tr_out choi[i,j] = I_{n_i} for every input block i
///
/// The struct itself only pins dimensions; validity is a property checked
/// by is_channel, so that deliberately perturbed non-channels can be
/// represented and rejected.
struct Channel {
  Algebra input;
  Algebra output;
  std::vector<HermitianMatrix> choi;  // dense, index i * output.num_blocks() + j

  Channel() = default;
  Channel(Algebra in, Algebra out);

  const HermitianMatrix& choi_block(int i, int j) const {
    return choi[static_cast<std::size_t>(i) * output.num_blocks() + static_cast<std::size_t>(j)];
  }
  void set_choi_block(int i, int j, HermitianMatrix m);
};

struct ChannelReport {
  bool ok = false;
  double psd_violation = 0.0;        // most negative Choi eigenvalue, flipped
  double unitality_residual = 0.0;   // worst entry deviation of Σ_j Tr_out choi[i,j] from I
};

/// Complete positivity and unitality within tol.
ChannelReport is_channel(const Channel& c, double tol = 1e-9);

/// Schrödinger action on a predual element.
StateFunctional apply(const Channel& c, const StateFunctional& a);

/// Heisenberg action on an algebra element.
AlgebraElement apply_adjoint(const Channel& c, const AlgebraElement& b);

/// ⟨Φ(a), B⟩ evaluated directly through the Choi pairing formula.
Complex choi_pairing(const Channel& c, const StateFunctional& a, const AlgebraElement& b);

/// after ∘ before.
Channel compose(const Channel& after, const Channel& before);

Channel tensor_channels(const Channel& c1, const Channel& c2);

/// Margin of a channel into tensor_algebra(out1, out2): partial trace of
/// each Choi block over the discarded output factor, summed over that
/// factor's block index.
Channel margin(const Channel& c, int factor, const Algebra& out1, const Algebra& out2);

/// Measurement as a channel into ℓ¹ over its outcomes (block x of the
/// output corresponds to effect x, in the measurement's outcome order).
Channel from_measurement(const Measurement& m);

/// a ↦ Σ_x ⟨a, M(x)⟩ · prep_x ; a valid channel for any prepared states.
Channel measure_and_prepare(const Measurement& m, const std::vector<StateFunctional>& prep);

/// a ↦ γ a + (1−γ) tr[a] I/d on the d-level quantum algebra. The Choi
/// block is γ·d·|ω⟩⟨ω| + (1−γ)·I/d; γ outside the completely positive
/// range yields an object that fails is_channel.
Channel depolarizing(int d, double gamma);

Channel identity_channel(const Algebra& a);

/// The unique channel into the trivial algebra ℂ.
Channel trivial_channel(const Algebra& a);

/// Classical broadcast ℓ¹(X) → ℓ¹(X×X), f ↦ f(x)δ_xy; both margins are
/// the identity.
Channel broadcast_abelian(int num_points);

/// Worst entrywise Choi deviation between channels on the same algebras.
double channel_distance(const Channel& c1, const Channel& c2);

/// Random channel: seeded random positive Choi blocks renormalized to
/// exact unitality.
Channel random_channel(const Algebra& in, const Algebra& out, Rng& rng);

}  // namespace witnesskit
