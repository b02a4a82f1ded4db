#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "witnesskit/algebra.hpp"

using namespace witnesskit;
using namespace witnesskit::testutil;

TEST_SUITE("algebra") {

TEST_CASE("algebra construction and dimensions") {
  const Algebra a({1, 2});
  CHECK(a.dim() == 5);
  CHECK(a.total_hilbert_dim() == 3);
  CHECK_THROWS_AS(Algebra(std::vector<int>{}), DimensionError);
  CHECK_THROWS_AS(Algebra({0}), DimensionError);
}

TEST_CASE("is_abelian") {
  CHECK(is_abelian(Algebra::classical(4)));
  CHECK_FALSE(is_abelian(Algebra::quantum(2)));
  CHECK_FALSE(is_abelian(Algebra({1, 1, 2})));
}

TEST_CASE("tensor_algebra block products") {
  CHECK(tensor_algebra(Algebra::classical(2), Algebra::classical(3)) == Algebra::classical(6));
  CHECK(tensor_algebra(Algebra::quantum(2), Algebra::quantum(2)) == Algebra::quantum(4));
  const Algebra t = tensor_algebra(Algebra({1, 2}), Algebra({2}));
  CHECK(t == Algebra({2, 4}));
  CHECK(t.dim() == 20);
  CHECK(Algebra({1, 2}).dim() * Algebra({2}).dim() == t.dim());
}

TEST_CASE("pairing") {
  const Algebra a = Algebra::quantum(2);
  Rng rng(31);
  const StateFunctional s = random_state(a, rng);
  CHECK(pair_real(s, AlgebraElement::one(a)) == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix z(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  CHECK(pair_real(trace_state(a), AlgebraElement::embed(a, 0, z)) ==
        doctest::Approx(0.0).epsilon(1e-14));

  // entrywise-sum oracle on a random pair
  const AlgebraElement e = random_selfadjoint(Algebra({1, 2}), rng);
  const StateFunctional f = random_state(Algebra({1, 2}), rng);
  Complex oracle = 0.0;
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < f.block[static_cast<std::size_t>(b)].rows; ++i)
      for (int j = 0; j < f.block[static_cast<std::size_t>(b)].cols; ++j)
        oracle += f.block[static_cast<std::size_t>(b)](i, j) * e.block[static_cast<std::size_t>(b)](j, i);
  CHECK(std::abs(pair(f, e) - oracle) <= 1e-13);

  CHECK_THROWS_AS(pair(random_state(Algebra::quantum(2), rng),
                       AlgebraElement::one(Algebra::quantum(3))),
                  AlgebraMismatchError);
}

TEST_CASE("trace_state is faithful with min pairing 1/N") {
  const StateFunctional t2 = trace_state(Algebra::quantum(2));
  CHECK(t2.block[0](0, 0).real() == doctest::Approx(0.5));

  const StateFunctional t3 = trace_state(Algebra::classical(3));
  for (int i = 0; i < 3; ++i)
    CHECK(t3.block[static_cast<std::size_t>(i)](0, 0).real() == doctest::Approx(1.0 / 3));

  // blocks [1,2]: weights I/3 per block; minimize the pairing over
  // unit-norm positive elements by scanning rank-one projectors per block.
  const Algebra mixed({1, 2});
  const StateFunctional tm = trace_state(mixed);
  Rng rng(32);
  double lo = 1.0;
  for (int rep = 0; rep < 200; ++rep) {
    ComplexMatrix v(2, 1);
    v(0, 0) = Complex(rng.gauss(), rng.gauss());
    v(1, 0) = Complex(rng.gauss(), rng.gauss());
    double n = std::sqrt(std::norm(v(0, 0)) + std::norm(v(1, 0)));
    v(0, 0) /= n;
    v(1, 0) /= n;
    lo = std::min(lo, pair_real(tm, AlgebraElement::embed(mixed, 1, v * v.adjoint())));
  }
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  lo = std::min(lo, pair_real(tm, AlgebraElement::embed(mixed, 0, one)));
  CHECK(lo == doctest::Approx(1.0 / 3).epsilon(1e-9));

  // faithfulness on random positive elements
  for (int rep = 0; rep < 20; ++rep) {
    AlgebraElement e = random_selfadjoint(mixed, rng);
    for (std::size_t b = 0; b < e.block.size(); ++b)
      e.block[b] = e.block[b] * e.block[b];  // positive, generically nonzero
    CHECK(pair_real(tm, e) > 0.0);
  }
}

TEST_CASE("ic_povm outcome counts and validity") {
  const Measurement m3 = ic_povm(Algebra::classical(3));
  CHECK(m3.num_outcomes() == 3);
  m3.validate();

  const Measurement mq = ic_povm(Algebra::quantum(2));
  CHECK(mq.num_outcomes() == 4);
  mq.validate();
  CHECK(is_informationally_complete(mq));

  const Measurement mm = ic_povm(Algebra({1, 2}));
  CHECK(mm.num_outcomes() == 5);
  mm.validate();
  CHECK(is_informationally_complete(mm));
}

TEST_CASE("is_informationally_complete distinguishes spanning from deficient") {
  // delta measurement on a classical algebra
  const Algebra cl = Algebra::classical(3);
  Measurement delta;
  delta.algebra = cl;
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  for (int x = 0; x < 3; ++x)
    delta.effects.emplace_back(std::to_string(x), AlgebraElement::embed(cl, x, one));
  delta.validate();
  CHECK(is_informationally_complete(delta));

  // projective basis measurement on a qubit spans only 2 of 4 dimensions
  const Algebra q = Algebra::quantum(2);
  Measurement basis;
  basis.algebra = q;
  ComplexMatrix p0(2, 2), p1(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  basis.effects.emplace_back("0", AlgebraElement::embed(q, 0, p0));
  basis.effects.emplace_back("1", AlgebraElement::embed(q, 0, p1));
  basis.validate();
  CHECK_FALSE(is_informationally_complete(basis));
}

TEST_CASE("measurement invariants hold for random measurements") {
  Rng rng(33);
  for (const Algebra& a : {Algebra::quantum(2), Algebra({1, 2}), Algebra::classical(3)}) {
    const Measurement m = random_measurement(a, 4, rng);
    AlgebraElement sum = AlgebraElement::zero(a);
    for (const auto& [l, e] : m.effects) {
      CHECK(e.min_block_eigenvalue() >= -1e-10);
      sum += e;
    }
    CHECK((sum - AlgebraElement::one(a)).max_abs() <= 1e-10);
  }
}

TEST_CASE("state ensemble marginal passes the state invariant") {
  Rng rng(34);
  const Algebra a = Algebra::quantum(2);
  StateEnsemble ens;
  ens.algebra = a;
  // two random states with weights 0.3, 0.7
  ens.members.emplace_back("u", 0.3 * random_state(a, rng));
  ens.members.emplace_back("v", 0.7 * random_state(a, rng));
  ens.validate();
  CHECK(ens.marginal().is_state());
}

}  // TEST_SUITE
