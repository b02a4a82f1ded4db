#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "witnesskit/matrix.hpp"

using namespace witnesskit;
using namespace witnesskit::testutil;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_SUITE("matrix") {

TEST_CASE("kron identity and diagonal cases") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK(max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);

  ComplexMatrix d12(2, 2), d3(1, 1);
  d12(0, 0) = 1.0;
  d12(1, 1) = 2.0;
  d3(0, 0) = 3.0;
  const ComplexMatrix k = kron(d12, d3);
  CHECK(k.rows == 2);
  CHECK(k(0, 0) == Complex(3.0));
  CHECK(k(1, 1) == Complex(6.0));
}

TEST_CASE("kron of Paulis matches entry-formula oracle") {
  CHECK(max_abs_diff(kron(pauli_x(), pauli_y()), kron_oracle(pauli_x(), pauli_y())) == 0.0);
}

TEST_CASE("kron is associative and bilinear on random inputs") {
  Rng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    const ComplexMatrix a = random_matrix(2, 3, rng);
    const ComplexMatrix b = random_matrix(3, 2, rng);
    const ComplexMatrix c = random_matrix(2, 2, rng);
    const double scale = kron(kron(a, b), c).max_abs();
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) <= 1e-12 * scale);
    const ComplexMatrix a2 = random_matrix(2, 3, rng);
    CHECK(max_abs_diff(kron(a + a2, b), kron(a, b) + kron(a2, b)) <= 1e-12 * scale);
    CHECK(max_abs_diff(kron(Complex(0.0, 2.0) * a, b), Complex(0.0, 2.0) * kron(a, b)) <=
          1e-12 * scale);
  }
}

TEST_CASE("partial trace basics") {
  CHECK(max_abs_diff(partial_trace(ComplexMatrix::identity(4), {2, 2}, {0}),
                     2.0 * ComplexMatrix::identity(2)) == 0.0);

  // |ω⟩⟨ω| margin for d = 2
  ComplexMatrix omega(4, 4);
  for (int i : {0, 3})
    for (int j : {0, 3}) omega(i, j) = 0.5;
  CHECK(max_abs_diff(partial_trace(omega, {2, 2}, {0}), 0.5 * ComplexMatrix::identity(2)) <=
        1e-15);
}

TEST_CASE("partial trace matches contraction oracle on random 8x8") {
  Rng rng(12);
  const ComplexMatrix m = random_hermitian(8, rng).matrix();
  for (const std::vector<int>& keep :
       {std::vector<int>{0, 1}, std::vector<int>{0, 2}, std::vector<int>{1}, std::vector<int>{}}) {
    CHECK(max_abs_diff(partial_trace(m, {2, 2, 2}, keep),
                       partial_trace_oracle(m, {2, 2, 2}, keep)) <= 1e-13 * m.max_abs());
  }
  // trace preservation
  const ComplexMatrix pt = partial_trace(m, {2, 2, 2}, {0, 1});
  CHECK(std::abs(pt.trace() - m.trace()) <= 1e-12);
}

TEST_CASE("partial trace of kron splits") {
  Rng rng(13);
  const ComplexMatrix a = random_matrix(3, 3, rng);
  const ComplexMatrix b = random_matrix(2, 2, rng);
  const ComplexMatrix lhs = partial_trace(kron(a, b), {3, 2}, {0});
  CHECK(max_abs_diff(lhs, b.trace() * a) <= 1e-12 * lhs.max_abs());
}

TEST_CASE("partial trace rejects mismatched dims") {
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(4), {3, 2}, {0}), DimensionError);
}

TEST_CASE("permute_factors swaps tensor slots") {
  Rng rng(14);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  const ComplexMatrix b = random_matrix(3, 3, rng);
  CHECK(max_abs_diff(permute_factors(kron(a, b), {2, 3}, {1, 0}), kron(b, a)) <= 1e-13);

  const ComplexMatrix c = random_matrix(2, 2, rng);
  const ComplexMatrix p =
      permute_factors(kron(kron(a, b), c), {2, 3, 2}, {0, 2, 1});
  CHECK(max_abs_diff(p, kron(kron(a, c), b)) <= 1e-13);
}

TEST_CASE("herm_eig on small frozen cases") {
  const EigResult de = herm_eig(HermitianMatrix(diag2(3.0, 1.0)));
  CHECK(de.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(de.values[1] == doctest::Approx(1.0).epsilon(1e-12));

  const EigResult xe = herm_eig(HermitianMatrix(pauli_x()));
  CHECK(xe.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(xe.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
  // eigenvectors (1, ±1)/√2 up to phase
  for (int k = 0; k < 2; ++k) {
    const double ratio = std::abs(xe.vectors(1, k) / xe.vectors(0, k) - (k == 0 ? 1.0 : -1.0));
    CHECK(ratio <= 1e-10);
  }
}

TEST_CASE("herm_eig reconstructs and is unitary on random matrices") {
  Rng rng(15);
  for (int n : {1, 2, 3, 5, 8, 13}) {
    const HermitianMatrix h = random_hermitian(n, rng);
    const EigResult eig = herm_eig(h);
    ComplexMatrix lam(n, n);
    for (int k = 0; k < n; ++k) lam(k, k) = eig.values[static_cast<std::size_t>(k)];
    const ComplexMatrix rec = eig.vectors * lam * eig.vectors.adjoint();
    CHECK(max_abs_diff(rec, h.matrix()) <= 1e-10 * std::max(1.0, h.matrix().max_abs()));
    CHECK(max_abs_diff(eig.vectors.adjoint() * eig.vectors, ComplexMatrix::identity(n)) <= 1e-10);
    for (int k = 0; k + 1 < n; ++k)
      CHECK(eig.values[static_cast<std::size_t>(k)] >= eig.values[static_cast<std::size_t>(k + 1)]);
  }
}

TEST_CASE("herm_eig shift property") {
  Rng rng(16);
  const HermitianMatrix h = random_hermitian(6, rng);
  const double c = 2.75;
  const HermitianMatrix shifted(h.matrix() + c * ComplexMatrix::identity(6), 1e-9);
  const EigResult e0 = herm_eig(h);
  const EigResult e1 = herm_eig(shifted);
  for (int k = 0; k < 6; ++k)
    CHECK(e1.values[static_cast<std::size_t>(k)] ==
          doctest::Approx(e0.values[static_cast<std::size_t>(k)] + c).epsilon(1e-11));
}

TEST_CASE("herm_eig handles degenerate spectra") {
  // projector onto a 2-dim subspace of C^4 plus identity: eigenvalues {2,2,1,1}
  Rng rng(17);
  const ComplexMatrix u = random_unitary(4, rng);
  ComplexMatrix p(4, 4);
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) p(i, j) += u(i, k) * std::conj(u(j, k));
  const HermitianMatrix h(p + ComplexMatrix::identity(4), 1e-9);
  const EigResult eig = herm_eig(h);
  CHECK(eig.values[0] == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(eig.values[2] == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(eig.values[3] == doctest::Approx(1.0).epsilon(1e-11));
  ComplexMatrix lam(4, 4);
  for (int k = 0; k < 4; ++k) lam(k, k) = eig.values[static_cast<std::size_t>(k)];
  CHECK(max_abs_diff(eig.vectors * lam * eig.vectors.adjoint(), h.matrix()) <= 1e-10);
}

TEST_CASE("trace_norm basics and oracle") {
  CHECK(trace_norm(ComplexMatrix::identity(5)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(trace_norm(diag2(1.0, -2.0)) == doctest::Approx(3.0).epsilon(1e-12));

  Rng rng(18);
  const ComplexMatrix m = random_matrix(3, 3, rng);
  CHECK(trace_norm(m) == doctest::Approx(trace_norm_oracle(m)).epsilon(1e-10));
  CHECK(trace_norm(m) >= std::abs(m.trace()) - 1e-12);
}

TEST_CASE("trace_norm is unitarily invariant") {
  Rng rng(19);
  const ComplexMatrix m = random_matrix(4, 4, rng);
  const ComplexMatrix u = random_unitary(4, rng);
  const ComplexMatrix v = random_unitary(4, rng);
  CHECK(trace_norm(u * m * v) == doctest::Approx(trace_norm(m)).epsilon(1e-10));
}

TEST_CASE("hermitian construction symmetrizes and validates") {
  ComplexMatrix near(2, 2);
  near(0, 0) = 1.0;
  near(0, 1) = Complex(0.5, 1e-14);
  near(1, 0) = Complex(0.5, 1e-14);  // conj deviation 2e-14
  near(1, 1) = 2.0;
  const HermitianMatrix h(near);
  CHECK(std::abs(h(0, 1) - std::conj(h(1, 0))) == 0.0);

  ComplexMatrix bad(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(HermitianMatrix{bad}, NumericError);
}

TEST_CASE("cholesky solves and inverts") {
  Rng rng(20);
  const HermitianMatrix psd(random_psd(5, rng).matrix() + ComplexMatrix::identity(5), 1e-9);
  const ComplexMatrix L = cholesky(psd);
  CHECK(max_abs_diff(L * L.adjoint(), psd.matrix()) <= 1e-11 * psd.matrix().max_abs());
  const HermitianMatrix inv = cholesky_inverse(psd);
  CHECK(max_abs_diff(inv.matrix() * psd.matrix(), ComplexMatrix::identity(5)) <= 1e-10);
  CHECK_THROWS_AS(cholesky(HermitianMatrix(diag2(1.0, -0.5))), NumericError);
}

TEST_CASE("inverse_sqrt") {
  Rng rng(21);
  const HermitianMatrix psd(random_psd(4, rng).matrix() + ComplexMatrix::identity(4), 1e-9);
  const HermitianMatrix is = inverse_sqrt(psd);
  const ComplexMatrix prod = is.matrix() * psd.matrix() * is.matrix();
  CHECK(max_abs_diff(prod, ComplexMatrix::identity(4)) <= 1e-10);
}

}  // TEST_SUITE
