#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace witnesskit {

using Complex = std::complex<double>;

/// Thrown when operand shapes or block structures do not line up.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when an iterative numeric routine fails to converge or an
/// operand is numerically unusable (non-finite entries, singular factor).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tolerances are relative to the largest absolute entry of the operand,
// with an absolute floor.
inline constexpr double kToleranceFloor = 1e-14;

/// Dense complex matrix, row-major storage.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Complex> entries;

  ComplexMatrix() = default;
  ComplexMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c) {
    if (r < 0 || c < 0) throw DimensionError("negative matrix dimension");
  }

  static ComplexMatrix zero(int r, int c) { return ComplexMatrix(r, c); }
  static ComplexMatrix identity(int n);

  Complex& operator()(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
  const Complex& operator()(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }

  bool is_square() const { return rows == cols; }
  bool is_finite() const;
  double max_abs() const;
  double frobenius_norm() const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex s);
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(double s, ComplexMatrix a);

/// tr(a * b); complex in general, real when both operands are Hermitian.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Re tr(a * b) — the real pairing used for Hermitian operands throughout.
double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square matrix constrained to equal its conjugate transpose.
/// Construction symmetrizes the input and rejects matrices whose
/// anti-Hermitian part exceeds `tol` relative to the largest entry.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12);

  static HermitianMatrix zero(int n) { return HermitianMatrix(ComplexMatrix::zero(n, n)); }
  static HermitianMatrix identity(int n) { return HermitianMatrix(ComplexMatrix::identity(n)); }

  int dim() const { return m_.rows; }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

 private:
  ComplexMatrix m_;
};

/// Kronecker product; (a⊗b)[(i,k),(j,l)] = a[i,j]·b[k,l].
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Trace over the tensor factors not listed in `keep`.
/// `dims` are the factor dimensions (their product must equal the matrix
/// dimension); `keep` is a strictly increasing list of factor indices.
/// Kept factors retain their original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

/// Reorders the tensor factors of a square matrix on ⊗_i C^{dims[i]}.
/// Factor j of the result is factor perm[j] of the input.
ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<int>& dims,
                              const std::vector<int>& perm);

struct EigResult {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // unitary, column k pairs with values[k]
};

/// Full eigendecomposition of a Hermitian matrix: h = V diag(λ) V*.
/// Householder tridiagonalization followed by implicit-shift QL;
/// deterministic, no external dependencies.
EigResult herm_eig(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);
double max_eigenvalue(const HermitianMatrix& h);

/// Sum of singular values of a square matrix.
double trace_norm(const ComplexMatrix& m);

/// Basis of the real space of n×n Hermitian matrices, in a fixed order:
/// E_kk, then for k<l the pairs E_kl+E_lk and i(E_kl−E_lk).
std::vector<HermitianMatrix> hermitian_basis(int n);

/// f(h) through the eigendecomposition; f applied to each eigenvalue.
HermitianMatrix hermitian_function(const HermitianMatrix& h, double (*f)(double));

/// Inverse square root of a positive definite matrix.
HermitianMatrix inverse_sqrt(const HermitianMatrix& h, double rel_cutoff = 1e-12);

/// Cholesky factor L with h = L L*. Throws NumericError unless h is
/// positive definite (pivot floor relative to the largest diagonal entry).
ComplexMatrix cholesky(const HermitianMatrix& h);

/// Solves L y = b (forward) or L* y = b (backward) for triangular L from cholesky().
ComplexMatrix cholesky_solve(const ComplexMatrix& L, const ComplexMatrix& rhs);

/// Inverse of a positive definite Hermitian matrix via its Cholesky factor.
HermitianMatrix cholesky_inverse(const HermitianMatrix& h);

}  // namespace witnesskit
