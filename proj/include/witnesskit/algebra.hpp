#pragma once

#include <string>
#include <utility>
#include <vector>

#include "witnesskit/matrix.hpp"
#include "witnesskit/rng.hpp"

namespace witnesskit {

/// Thrown when two objects live on different algebras.
class AlgebraMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finite-dimensional von Neumann algebra: a direct sum of full matrix
/// blocks, recorded by their dimensions. ℓ∞(X) is all blocks 1, a
/// d-level quantum system is the single block [d].
struct Algebra {
  std::vector<int> blocks;

  Algebra() = default;
  explicit Algebra(std::vector<int> b);

  static Algebra classical(int num_points);  // blocks [1,...,1]
  static Algebra quantum(int d);             // blocks [d]
  static Algebra trivial() { return quantum(1); }

  int num_blocks() const { return static_cast<int>(blocks.size()); }
  int block_dim(int i) const { return blocks[static_cast<std::size_t>(i)]; }
  /// Σ n_i² — the linear dimension of the algebra.
  int dim() const;
  /// Σ n_i — dimension of the underlying Hilbert space direct sum.
  int total_hilbert_dim() const;

  bool operator==(const Algebra& other) const { return blocks == other.blocks; }
  bool operator!=(const Algebra& other) const { return !(*this == other); }
};

bool is_abelian(const Algebra& a);

/// Blocks of tensor products n_i·m_j, ordered lexicographically in (i, j).
Algebra tensor_algebra(const Algebra& a1, const Algebra& a2);

/// Element of an algebra: one matrix per block.
struct AlgebraElement {
  Algebra algebra;
  std::vector<ComplexMatrix> block;

  AlgebraElement() = default;
  AlgebraElement(Algebra alg, std::vector<ComplexMatrix> blocks);

  static AlgebraElement zero(const Algebra& a);
  static AlgebraElement one(const Algebra& a);
  /// Zero except for the given block.
  static AlgebraElement embed(const Algebra& a, int block_index, const ComplexMatrix& m);

  bool is_selfadjoint(double tol = 1e-10) const;
  double min_block_eigenvalue() const;
  double max_abs() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex s, AlgebraElement a);
AlgebraElement operator*(double s, AlgebraElement a);

/// Element of the predual, paired with the algebra by ⟨a, A⟩ = Σ_i tr(a_i A_i).
/// States are the positive normalized functionals.
struct StateFunctional {
  Algebra algebra;
  std::vector<ComplexMatrix> block;

  StateFunctional() = default;
  StateFunctional(Algebra alg, std::vector<ComplexMatrix> blocks);

  static StateFunctional zero(const Algebra& a);
  static StateFunctional embed(const Algebra& a, int block_index, const ComplexMatrix& m);

  Complex total_trace() const;
  bool is_selfadjoint(double tol = 1e-10) const;
  double min_block_eigenvalue() const;
  /// Positive within tolerance and trace one within 1e-10.
  bool is_state(double psd_tol = 1e-9) const;
  /// Sum of block trace norms (the predual norm for selfadjoint functionals).
  double norm() const;

  StateFunctional& operator+=(const StateFunctional& other);
  StateFunctional& operator*=(Complex s);
};

StateFunctional operator+(StateFunctional a, const StateFunctional& b);
StateFunctional operator-(const StateFunctional& a, const StateFunctional& b);
StateFunctional operator*(Complex s, StateFunctional a);
StateFunctional operator*(double s, StateFunctional a);

/// Canonical pairing ⟨s, e⟩ = Σ_i tr(s_i e_i).
Complex pair(const StateFunctional& s, const AlgebraElement& e);
/// Real part of the pairing; exact for selfadjoint operands.
double pair_real(const StateFunctional& s, const AlgebraElement& e);

/// Measurement: labeled positive effects summing to the identity.
struct Measurement {
  Algebra algebra;
  std::vector<std::pair<std::string, AlgebraElement>> effects;

  int num_outcomes() const { return static_cast<int>(effects.size()); }
  const AlgebraElement& effect(int i) const { return effects[static_cast<std::size_t>(i)].second; }
  const std::string& label(int i) const { return effects[static_cast<std::size_t>(i)].first; }

  /// Effects PSD within tol and summing to the identity within 1e-10.
  void validate(double psd_tol = 1e-10) const;
};

/// Labeled family of positive subnormalized functionals summing to a state.
struct StateEnsemble {
  Algebra algebra;
  std::vector<std::pair<std::string, StateFunctional>> members;

  int size() const { return static_cast<int>(members.size()); }
  const StateFunctional& at(const std::string& label) const;
  StateFunctional marginal() const;
  void validate(double psd_tol = 1e-9) const;
};

/// Real coordinates of a selfadjoint element, isometric for the trace
/// inner product: block diagonals, then √2·(re, im) of the upper triangles.
std::vector<double> selfadjoint_coordinates(const AlgebraElement& e);

/// True iff the effects span the selfadjoint part of the algebra
/// (rank test on the Gram matrix of the vectorized effects).
bool is_informationally_complete(const Measurement& m);

/// Informationally complete measurement with exactly dim(a) outcomes:
/// per quantum block a symmetrized rank-one frame, per classical block a
/// point evaluation. Labels are "0", "1", ....
Measurement ic_povm(const Algebra& a);

/// The normalized trace: block i carries I/N with N = Σ n_i. Faithful;
/// its minimal pairing against unit-norm positive elements is 1/N.
StateFunctional trace_state(const Algebra& a);

/// Uniformly random state / measurement / ensemble for sampled checks.
StateFunctional random_state(const Algebra& a, Rng& rng);
AlgebraElement random_selfadjoint(const Algebra& a, Rng& rng);
Measurement random_measurement(const Algebra& a, int outcomes, Rng& rng);

}  // namespace witnesskit
