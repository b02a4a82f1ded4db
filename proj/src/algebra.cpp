#include "witnesskit/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace witnesskit {

namespace {

void check_blocks(const Algebra& a, const std::vector<ComplexMatrix>& blocks) {
  if (static_cast<int>(blocks.size()) != a.num_blocks())
    throw DimensionError("block count does not match algebra");
  for (int i = 0; i < a.num_blocks(); ++i) {
    const ComplexMatrix& m = blocks[static_cast<std::size_t>(i)];
    if (m.rows != a.block_dim(i) || m.cols != a.block_dim(i))
      throw DimensionError("block dimension does not match algebra");
    if (!m.is_finite()) throw NumericError("non-finite block entries");
  }
}

double min_eig_of_blocks(const std::vector<ComplexMatrix>& blocks) {
  double lo = 0.0;
  bool first = true;
  for (const ComplexMatrix& m : blocks) {
    const double v = min_eigenvalue(HermitianMatrix(m, 1e-8));
    lo = first ? v : std::min(lo, v);
    first = false;
  }
  return lo;
}

bool blocks_selfadjoint(const std::vector<ComplexMatrix>& blocks, double tol) {
  for (const ComplexMatrix& m : blocks) {
    const double scale = std::max(m.max_abs(), kToleranceFloor);
    if ((m - m.adjoint()).max_abs() > tol * scale) return false;
  }
  return true;
}

}  // namespace

Algebra::Algebra(std::vector<int> b) : blocks(std::move(b)) {
  if (blocks.empty()) throw DimensionError("algebra needs at least one block");
  for (int n : blocks)
    if (n <= 0) throw DimensionError("block dimensions must be positive");
}

Algebra Algebra::classical(int num_points) {
  return Algebra(std::vector<int>(static_cast<std::size_t>(num_points), 1));
}

Algebra Algebra::quantum(int d) { return Algebra({d}); }

int Algebra::dim() const {
  int s = 0;
  for (int n : blocks) s += n * n;
  return s;
}

int Algebra::total_hilbert_dim() const {
  int s = 0;
  for (int n : blocks) s += n;
  return s;
}

bool is_abelian(const Algebra& a) {
  return std::all_of(a.blocks.begin(), a.blocks.end(), [](int n) { return n == 1; });
}

Algebra tensor_algebra(const Algebra& a1, const Algebra& a2) {
  std::vector<int> blocks;
  blocks.reserve(a1.blocks.size() * a2.blocks.size());
  for (int n : a1.blocks)
    for (int m : a2.blocks) blocks.push_back(n * m);
  return Algebra(std::move(blocks));
}

AlgebraElement::AlgebraElement(Algebra alg, std::vector<ComplexMatrix> blocks)
    : algebra(std::move(alg)), block(std::move(blocks)) {
  check_blocks(algebra, block);
}

AlgebraElement AlgebraElement::zero(const Algebra& a) {
  std::vector<ComplexMatrix> blocks;
  for (int n : a.blocks) blocks.push_back(ComplexMatrix::zero(n, n));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::one(const Algebra& a) {
  std::vector<ComplexMatrix> blocks;
  for (int n : a.blocks) blocks.push_back(ComplexMatrix::identity(n));
  return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::embed(const Algebra& a, int block_index, const ComplexMatrix& m) {
  AlgebraElement e = zero(a);
  if (block_index < 0 || block_index >= a.num_blocks())
    throw DimensionError("block index out of range");
  if (m.rows != a.block_dim(block_index) || m.cols != m.rows)
    throw DimensionError("embedded block has wrong dimension");
  e.block[static_cast<std::size_t>(block_index)] = m;
  return e;
}

bool AlgebraElement::is_selfadjoint(double tol) const { return blocks_selfadjoint(block, tol); }

double AlgebraElement::min_block_eigenvalue() const { return min_eig_of_blocks(block); }

double AlgebraElement::max_abs() const {
  double m = 0.0;
  for (const ComplexMatrix& b : block) m = std::max(m, b.max_abs());
  return m;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  if (algebra != other.algebra) throw AlgebraMismatchError("element sum across algebras");
  for (std::size_t i = 0; i < block.size(); ++i) block[i] += other.block[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (ComplexMatrix& b : block) b *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  AlgebraElement r = a;
  r += Complex(-1.0) * b;
  return r;
}
AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
AlgebraElement operator*(double s, AlgebraElement a) { return a *= Complex(s); }

StateFunctional::StateFunctional(Algebra alg, std::vector<ComplexMatrix> blocks)
    : algebra(std::move(alg)), block(std::move(blocks)) {
  check_blocks(algebra, block);
}

StateFunctional StateFunctional::zero(const Algebra& a) {
  std::vector<ComplexMatrix> blocks;
  for (int n : a.blocks) blocks.push_back(ComplexMatrix::zero(n, n));
  return StateFunctional(a, std::move(blocks));
}

StateFunctional StateFunctional::embed(const Algebra& a, int block_index, const ComplexMatrix& m) {
  StateFunctional s = zero(a);
  if (block_index < 0 || block_index >= a.num_blocks())
    throw DimensionError("block index out of range");
  if (m.rows != a.block_dim(block_index) || m.cols != m.rows)
    throw DimensionError("embedded block has wrong dimension");
  s.block[static_cast<std::size_t>(block_index)] = m;
  return s;
}

Complex StateFunctional::total_trace() const {
  Complex t = 0.0;
  for (const ComplexMatrix& b : block) t += b.trace();
  return t;
}

bool StateFunctional::is_selfadjoint(double tol) const { return blocks_selfadjoint(block, tol); }

double StateFunctional::min_block_eigenvalue() const { return min_eig_of_blocks(block); }

bool StateFunctional::is_state(double psd_tol) const {
  if (!is_selfadjoint(1e-8)) return false;
  if (min_block_eigenvalue() < -psd_tol) return false;
  return std::abs(total_trace() - Complex(1.0)) <= 1e-10;
}

double StateFunctional::norm() const {
  double s = 0.0;
  for (const ComplexMatrix& b : block) s += trace_norm(b);
  return s;
}

StateFunctional& StateFunctional::operator+=(const StateFunctional& other) {
  if (algebra != other.algebra) throw AlgebraMismatchError("functional sum across algebras");
  for (std::size_t i = 0; i < block.size(); ++i) block[i] += other.block[i];
  return *this;
}

StateFunctional& StateFunctional::operator*=(Complex s) {
  for (ComplexMatrix& b : block) b *= s;
  return *this;
}

StateFunctional operator+(StateFunctional a, const StateFunctional& b) { return a += b; }
StateFunctional operator-(const StateFunctional& a, const StateFunctional& b) {
  StateFunctional r = a;
  r += Complex(-1.0) * b;
  return r;
}
StateFunctional operator*(Complex s, StateFunctional a) { return a *= s; }
StateFunctional operator*(double s, StateFunctional a) { return a *= Complex(s); }

Complex pair(const StateFunctional& s, const AlgebraElement& e) {
  if (s.algebra != e.algebra) throw AlgebraMismatchError("pairing across algebras");
  Complex t = 0.0;
  for (std::size_t i = 0; i < s.block.size(); ++i)
    t += trace_product(s.block[i], e.block[i]);
  return t;
}

double pair_real(const StateFunctional& s, const AlgebraElement& e) {
  if (s.algebra != e.algebra) throw AlgebraMismatchError("pairing across algebras");
  double t = 0.0;
  for (std::size_t i = 0; i < s.block.size(); ++i)
    t += trace_product_real(s.block[i], e.block[i]);
  return t;
}

void Measurement::validate(double psd_tol) const {
  if (effects.empty()) throw DimensionError("measurement needs at least one outcome");
  AlgebraElement sum = AlgebraElement::zero(algebra);
  for (const auto& [label, eff] : effects) {
    if (eff.algebra != algebra) throw AlgebraMismatchError("effect on wrong algebra");
    if (!eff.is_selfadjoint(1e-8)) throw NumericError("effect not selfadjoint: " + label);
    if (eff.min_block_eigenvalue() < -psd_tol)
      throw NumericError("effect not positive: " + label);
    sum += eff;
  }
  const AlgebraElement dev = sum - AlgebraElement::one(algebra);
  if (dev.max_abs() > 1e-10) throw NumericError("effects do not sum to the identity");
}

const StateFunctional& StateEnsemble::at(const std::string& label) const {
  for (const auto& [l, s] : members)
    if (l == label) return s;
  throw DimensionError("unknown ensemble label: " + label);
}

StateFunctional StateEnsemble::marginal() const {
  StateFunctional sum = StateFunctional::zero(algebra);
  for (const auto& [l, s] : members) sum += s;
  return sum;
}

void StateEnsemble::validate(double psd_tol) const {
  for (const auto& [l, s] : members) {
    if (s.algebra != algebra) throw AlgebraMismatchError("ensemble member on wrong algebra");
    if (!s.is_selfadjoint(1e-8) || s.min_block_eigenvalue() < -psd_tol)
      throw NumericError("ensemble member not positive: " + l);
  }
  if (!marginal().is_state(psd_tol)) throw NumericError("ensemble does not sum to a state");
}

std::vector<double> selfadjoint_coordinates(const AlgebraElement& e) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(e.algebra.dim()));
  const double rt2 = std::sqrt(2.0);
  for (const ComplexMatrix& b : e.block) {
    for (int i = 0; i < b.rows; ++i) v.push_back(b(i, i).real());
    for (int i = 0; i < b.rows; ++i)
      for (int j = i + 1; j < b.cols; ++j) {
        v.push_back(rt2 * b(i, j).real());
        v.push_back(rt2 * b(i, j).imag());
      }
  }
  return v;
}

bool is_informationally_complete(const Measurement& m) {
  const int dim = m.algebra.dim();
  const int k = m.num_outcomes();
  std::vector<std::vector<double>> coords;
  coords.reserve(static_cast<std::size_t>(k));
  for (const auto& [label, eff] : m.effects) coords.push_back(selfadjoint_coordinates(eff));

  ComplexMatrix gram(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < coords[static_cast<std::size_t>(i)].size(); ++t)
        s += coords[static_cast<std::size_t>(i)][t] * coords[static_cast<std::size_t>(j)][t];
      gram(i, j) = s;
    }
  const EigResult eig = herm_eig(HermitianMatrix(gram, 1e-8));
  const double top = eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
  int rank = 0;
  for (double lam : eig.values)
    if (lam > 1e-9 * top) ++rank;
  return rank == dim;
}

namespace {

// Frame vectors spanning the selfadjoint part of M_n as rank-one
// projections: e_k, (e_k+e_l)/√2, (e_k+i·e_l)/√2.
std::vector<ComplexMatrix> ic_frame_vectors(int n) {
  std::vector<ComplexMatrix> vs;
  const double irt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k) {
    ComplexMatrix v(n, 1);
    v(k, 0) = 1.0;
    vs.push_back(v);
  }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      ComplexMatrix v(n, 1);
      v(k, 0) = irt2;
      v(l, 0) = irt2;
      vs.push_back(v);
      ComplexMatrix w(n, 1);
      w(k, 0) = irt2;
      w(l, 0) = Complex(0.0, irt2);
      vs.push_back(w);
    }
  return vs;
}

std::vector<ComplexMatrix> ic_effects_for_block(int n, Rng& rng) {
  std::vector<ComplexMatrix> vs = ic_frame_vectors(n);
  for (int attempt = 0; attempt < 4; ++attempt) {
    ComplexMatrix t(n, n);
    for (const ComplexMatrix& v : vs) t += v * v.adjoint();
    bool ok = true;
    HermitianMatrix tis;
    try {
      tis = inverse_sqrt(HermitianMatrix(t, 1e-8));
    } catch (const NumericError&) {
      ok = false;
    }
    if (ok) {
      std::vector<ComplexMatrix> effects;
      effects.reserve(vs.size());
      for (const ComplexMatrix& v : vs) {
        const ComplexMatrix u = tis.matrix() * v;
        effects.push_back(u * u.adjoint());
      }
      return effects;
    }
    // Degenerate frame; perturb with seeded pseudo-random vectors and retry.
    for (ComplexMatrix& v : vs)
      for (int i = 0; i < n; ++i) v(i, 0) += 0.05 * Complex(rng.gauss(), rng.gauss());
  }
  throw NumericError("informationally complete frame remained rank deficient");
}

}  // namespace

Measurement ic_povm(const Algebra& a) {
  Rng rng(kDefaultSeed);
  Measurement m;
  m.algebra = a;
  int counter = 0;
  for (int i = 0; i < a.num_blocks(); ++i) {
    const int n = a.block_dim(i);
    if (n == 1) {
      ComplexMatrix one(1, 1);
      one(0, 0) = 1.0;
      m.effects.emplace_back(std::to_string(counter++), AlgebraElement::embed(a, i, one));
      continue;
    }
    for (const ComplexMatrix& eff : ic_effects_for_block(n, rng))
      m.effects.emplace_back(std::to_string(counter++), AlgebraElement::embed(a, i, eff));
  }
  m.validate();
  return m;
}

StateFunctional trace_state(const Algebra& a) {
  const double inv_n = 1.0 / static_cast<double>(a.total_hilbert_dim());
  std::vector<ComplexMatrix> blocks;
  for (int n : a.blocks) blocks.push_back(inv_n * ComplexMatrix::identity(n));
  return StateFunctional(a, std::move(blocks));
}

StateFunctional random_state(const Algebra& a, Rng& rng) {
  std::vector<ComplexMatrix> blocks;
  double total = 0.0;
  for (int n : a.blocks) {
    ComplexMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.gauss(), rng.gauss());
    ComplexMatrix p = g * g.adjoint();
    total += p.trace().real();
    blocks.push_back(std::move(p));
  }
  for (ComplexMatrix& b : blocks) b *= Complex(1.0 / total);
  return StateFunctional(a, std::move(blocks));
}

AlgebraElement random_selfadjoint(const Algebra& a, Rng& rng) {
  std::vector<ComplexMatrix> blocks;
  for (int n : a.blocks) {
    ComplexMatrix g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.gauss(), rng.gauss());
    blocks.push_back(0.5 * (g + g.adjoint()));
  }
  return AlgebraElement(a, std::move(blocks));
}

Measurement random_measurement(const Algebra& a, int outcomes, Rng& rng) {
  if (outcomes < 1) throw DimensionError("measurement needs at least one outcome");
  // Random positive effects normalized by the inverse square root of their sum.
  std::vector<AlgebraElement> raw;
  AlgebraElement sum = AlgebraElement::zero(a);
  for (int x = 0; x < outcomes; ++x) {
    std::vector<ComplexMatrix> blocks;
    for (int n : a.blocks) {
      ComplexMatrix g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(rng.gauss(), rng.gauss());
      blocks.push_back(g * g.adjoint());
    }
    raw.emplace_back(a, std::move(blocks));
    sum += raw.back();
  }
  std::vector<HermitianMatrix> norm;
  for (int i = 0; i < a.num_blocks(); ++i)
    norm.push_back(inverse_sqrt(HermitianMatrix(sum.block[static_cast<std::size_t>(i)], 1e-8)));

  Measurement m;
  m.algebra = a;
  for (int x = 0; x < outcomes; ++x) {
    std::vector<ComplexMatrix> blocks;
    for (int i = 0; i < a.num_blocks(); ++i) {
      const ComplexMatrix& s = norm[static_cast<std::size_t>(i)].matrix();
      blocks.push_back(s * raw[static_cast<std::size_t>(x)].block[static_cast<std::size_t>(i)] * s);
    }
    m.effects.emplace_back(std::to_string(x), AlgebraElement(a, std::move(blocks)));
  }
  m.validate(1e-8);
  return m;
}

}  // namespace witnesskit
