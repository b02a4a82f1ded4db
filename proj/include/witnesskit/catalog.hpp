#pragma once

#include <utility>

#include "witnesskit/witness.hpp"

namespace witnesskit {

/// Computational basis together with its Fourier transform, a mutually
/// unbiased pair: |⟨e_x|f_y⟩|² = 1/d for all x, y.
struct MubPair {
  int dim = 0;
  ComplexMatrix computational;  // columns e_x
  ComplexMatrix fourier;        // columns f_x = d^{-1/2} Σ_y exp(2πi·x·y/d) e_y
};

MubPair mub_pair(int d);

/// Noise threshold (√d+2)/(2(√d+1)): the basis measurements below stay
/// compatible exactly up to this visibility.
double gamma_threshold(int d);

/// Projective measurement onto the columns of an orthonormal basis,
/// labels prefix+"0", prefix+"1", ....
Measurement basis_measurement(const ComplexMatrix& basis, const std::string& label_prefix = "");

/// M(x) = γ|e_x⟩⟨e_x| + (1−γ)·I/d and the Fourier-basis analogue.
std::pair<Measurement, Measurement> noisy_mub_measurements(int d, double gamma);

/// Tight witness on measurement-measurement pairs built from the two
/// mutually unbiased bases; zero exactly at the noisy pair with the
/// threshold visibility.
WitnessForm mub_measurement_witness(int d);

/// Second slot lifted to a quantum output through the projections onto
/// the basis h.
WitnessForm measurement_channel_witness(int d, const ComplexMatrix& h);

/// Both slots lifted (first through g, second through h) and rescaled by
/// 2d.
WitnessForm channel_pair_witness(int d, const ComplexMatrix& g, const ComplexMatrix& h);

/// Witness d(d+1) − Tr[Θ+Λ] with the linear-map traces in tensor form
/// over a Hilbert-Schmidt-orthonormal selfadjoint basis; independent of
/// the basis choice.
WitnessForm cloning_trace_witness(int d);
WitnessForm cloning_trace_witness(int d, const ComplexMatrix& basis);

/// Margins of the optimal approximate cloner: two copies of
/// depolarizing(d, gamma_threshold(d²)). A compatible pair saturating the
/// cloning trace bound.
std::pair<Channel, Channel> cloning_margins(int d);

/// Measure-and-prepare channel reading the measurement and preparing the
/// pure states of the given basis.
Channel prepare_basis_channel(const Measurement& m, const ComplexMatrix& basis);

/// The positive operator on H⊗H⊗H whose top eigenvalue (d+1)/d certifies
/// the trace bound over compatible pairs; nonzero spectrum {(d±1)/d},
/// each with multiplicity d.
struct CloningTestOperator {
  HermitianMatrix op;
  std::vector<double> spectrum;  // descending
};

CloningTestOperator cloning_test_operator(int d);

}  // namespace witnesskit
