#include <doctest.h>

#include <cmath>

#include "sdp_oracle.hpp"
#include "test_util.hpp"
#include "witnesskit/sdp.hpp"

using namespace witnesskit;
using namespace witnesskit::testutil;

namespace {

// max ⟨C,X⟩ with tr X = 1: the top eigenvalue of C.
SdpProblem eigenvalue_problem(const HermitianMatrix& c) {
  SdpProblem p = SdpProblem::with_blocks({c.dim()});
  p.set_objective(0, c);
  p.add_constraint(0, HermitianMatrix::identity(c.dim()), 1.0);
  return p;
}

HermitianMatrix diag_h(std::vector<double> d) {
  ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  return HermitianMatrix(m);
}

// Hermitian basis rows pinning a block entrywise.
void pin_block(SdpProblem& p, int block, const ComplexMatrix& target) {
  const int n = target.rows;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix e(n, n);
    e(i, i) = 1.0;
    p.add_constraint(block, HermitianMatrix(e), target(i, i).real());
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      ComplexMatrix re(n, n), im(n, n);
      re(i, j) = re(j, i) = 1.0;
      im(i, j) = Complex(0.0, 1.0);
      im(j, i) = Complex(0.0, -1.0);
      p.add_constraint(block, HermitianMatrix(re), 2.0 * target(i, j).real());
      p.add_constraint(block, HermitianMatrix(im), 2.0 * target(i, j).imag());
    }
}

// Seeded random problem with a known strictly feasible point and a
// pinned total trace so the maximum is finite.
SdpProblem random_feasible_problem(Rng& rng) {
  const std::vector<int> dims = {3, 2};
  SdpProblem p = SdpProblem::with_blocks(dims);
  p.set_objective(0, random_hermitian(3, rng));
  p.set_objective(1, random_hermitian(2, rng));

  std::vector<ComplexMatrix> x0;
  for (int n : dims)
    x0.push_back(random_psd(n, rng).matrix() + 0.3 * ComplexMatrix::identity(n));

  for (int row = 0; row < 4; ++row) {
    SdpConstraint c;
    double rhs = 0.0;
    for (int b = 0; b < 2; ++b) {
      const HermitianMatrix a = random_hermitian(dims[static_cast<std::size_t>(b)], rng);
      rhs += trace_product_real(a.matrix(), x0[static_cast<std::size_t>(b)]);
      c.terms.emplace_back(b, a);
    }
    c.rhs = rhs;
    p.add_constraint(std::move(c));
  }
  SdpConstraint tr;
  double total = 0.0;
  for (int b = 0; b < 2; ++b) {
    tr.terms.emplace_back(b, HermitianMatrix::identity(dims[static_cast<std::size_t>(b)]));
    total += x0[static_cast<std::size_t>(b)].trace().real();
  }
  tr.rhs = total;
  p.add_constraint(std::move(tr));
  return p;
}

}  // namespace

TEST_SUITE("sdp") {

TEST_CASE("eigenvalue toy problem is exact") {
  const SdpSolution s = solve(eigenvalue_problem(diag_h({3.0, 1.0})));
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.primal_objective == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(s.dual_objective == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(std::abs(s.gap) <= 1e-7);

  Rng rng(61);
  const HermitianMatrix c = random_hermitian(4, rng);
  const SdpSolution s2 = solve(eigenvalue_problem(c));
  CHECK(s2.status == SdpStatus::optimal);
  CHECK(s2.primal_objective == doctest::Approx(max_eigenvalue(c)).epsilon(1e-8));
}

TEST_CASE("fully constrained problem returns the pinned matrix") {
  Rng rng(62);
  ComplexMatrix target(2, 2);
  target(0, 0) = 0.7;
  target(1, 1) = 0.3;
  target(0, 1) = Complex(0.1, 0.05);
  target(1, 0) = Complex(0.1, -0.05);

  SdpProblem p = SdpProblem::with_blocks({2});
  p.set_objective(0, HermitianMatrix::identity(2));
  pin_block(p, 0, target);
  const SdpSolution s = solve(p);
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.primal_objective == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(max_abs_diff(s.primal[0].matrix(), target) <= 1e-7);
}

TEST_CASE("duplicate rows are removed; contradictory duplicates are degenerate") {
  SdpProblem p = eigenvalue_problem(diag_h({2.0, -1.0}));
  p.add_constraint(0, HermitianMatrix::identity(2), 1.0);  // exact duplicate
  const SdpSolution s = solve(p);
  CHECK(s.status == SdpStatus::optimal);
  CHECK(s.primal_objective == doctest::Approx(2.0).epsilon(1e-8));

  SdpProblem q = eigenvalue_problem(diag_h({2.0, -1.0}));
  q.add_constraint(0, HermitianMatrix::identity(2), 1.5);  // inconsistent duplicate
  CHECK(solve(q).status == SdpStatus::numerically_degenerate);
}

TEST_CASE("verify passes on solved problems and flags tampering") {
  const SdpProblem p = eigenvalue_problem(diag_h({3.0, 1.0}));
  SdpSolution s = solve(p);
  const SdpVerifyReport ok = verify(p, s);
  CHECK(ok.ok);
  CHECK(ok.constraint_residual <= 1e-8);
  CHECK(ok.weak_duality_margin >= 0.0);

  s.primal[0] = HermitianMatrix(Complex(-1.0) * s.primal[0].matrix(), 1e-6);
  const SdpVerifyReport bad = verify(p, s);
  CHECK_FALSE(bad.ok);
  CHECK(bad.min_primal_eigenvalue < -0.5);
}

TEST_CASE("weak duality and verify on seeded random problems") {
  Rng rng(63);
  for (int rep = 0; rep < 6; ++rep) {
    const SdpProblem p = random_feasible_problem(rng);
    const SdpSolution s = solve(p);
    CHECK(s.status == SdpStatus::optimal);
    const double scale = 1.0 + std::max(std::abs(s.primal_objective), std::abs(s.dual_objective));
    CHECK(s.dual_objective >= s.primal_objective - 1e-7 * scale);
    CHECK(verify(p, s).ok);
  }
}

TEST_CASE("objective scaling scales the optimum and leaves residuals unchanged") {
  Rng rng(64);
  const SdpProblem p = random_feasible_problem(rng);
  const SdpSolution s1 = solve(p);

  SdpProblem p2 = p;
  const double c = 4.0;
  for (int b = 0; b < p.num_blocks(); ++b)
    p2.set_objective(b, HermitianMatrix(c * p.objective[static_cast<std::size_t>(b)].matrix(), 1e-10));
  const SdpSolution s2 = solve(p2);
  const double scale = 1.0 + std::abs(c * s1.primal_objective);
  CHECK(std::abs(s2.primal_objective - c * s1.primal_objective) <= 1e-7 * scale);
  CHECK(s2.constraint_residual <= 1e-7);
  CHECK(s1.constraint_residual <= 1e-7);
}

TEST_CASE("determinism: identical input, identical run") {
  Rng rng(65);
  const SdpProblem p = random_feasible_problem(rng);
  const SdpSolution s1 = solve(p);
  const SdpSolution s2 = solve(p);
  CHECK(s1.iterations == s2.iterations);
  CHECK(s1.primal_objective == s2.primal_objective);
  CHECK(s1.dual_objective == s2.dual_objective);
  CHECK(max_abs_diff(s1.primal[0].matrix(), s2.primal[0].matrix()) == 0.0);
}

TEST_CASE("interior point agrees with the splitting oracle") {
  // eigenvalue problem
  const SdpProblem p = eigenvalue_problem(diag_h({3.0, 1.0, -0.5}));
  const OracleResult oracle = admm_solve(p);
  CHECK(oracle.converged);
  CHECK(oracle.objective == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(solve(p).primal_objective == doctest::Approx(oracle.objective).epsilon(1e-5));

  // seeded random problem
  Rng rng(66);
  const SdpProblem q = random_feasible_problem(rng);
  const OracleResult oq = admm_solve(q);
  CHECK(oq.converged);
  CHECK(solve(q).primal_objective == doctest::Approx(oq.objective).epsilon(1e-5));
}

}  // TEST_SUITE
