#include "witnesskit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace witnesskit {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw DimensionError(msg);
}

double hypot2(double a, double b) { return std::hypot(a, b); }

}  // namespace

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool ComplexMatrix::is_finite() const {
  for (const Complex& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& z : entries) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : entries) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
  return r;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix r(rows, cols);
  for (std::size_t k = 0; k < entries.size(); ++k) r.entries[k] = std::conj(entries[k]);
  return r;
}

Complex ComplexMatrix::trace() const {
  require(is_square(), "trace of non-square matrix");
  Complex t = 0.0;
  for (int i = 0; i < rows; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require(rows == other.rows && cols == other.cols, "shape mismatch in +=");
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] += other.entries[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require(rows == other.rows && cols == other.cols, "shape mismatch in -=");
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] -= other.entries[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : entries) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols == b.rows, "shape mismatch in matrix product");
  ComplexMatrix r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      for (int j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  }
  return r;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= Complex(s); }

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols == b.rows && a.rows == b.cols, "shape mismatch in trace_product");
  Complex t = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) t += a(i, k) * b(k, i);
  return t;
}

double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  require(a.cols == b.rows && a.rows == b.cols, "shape mismatch in trace_product");
  double t = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const Complex &x = a(i, k), &y = b(k, i);
      t += x.real() * y.real() - x.imag() * y.imag();
    }
  return t;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require(m.is_square(), "Hermitian matrix must be square");
  if (!m.is_finite()) throw NumericError("non-finite entries in Hermitian matrix");
  const int n = m.rows;
  double dev = 0.0;
  m_ = ComplexMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex sym = 0.5 * (m(i, j) + std::conj(m(j, i)));
      dev = std::max(dev, std::abs(m(i, j) - sym));
      m_(i, j) = sym;
    }
  }
  const double scale = std::max(m.max_abs(), kToleranceFloor);
  if (dev > tol * scale)
    throw NumericError("matrix is not Hermitian (deviation " + std::to_string(dev) + ")");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (int k = 0; k < b.rows; ++k)
        for (int l = 0; l < b.cols; ++l) r(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
    }
  return r;
}

namespace {

// Row-major mixed-radix index helpers for tensor-factor manipulation.
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size());
  int acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = acc;
    acc *= dims[static_cast<std::size_t>(i)];
  }
  return s;
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  require(m.is_square(), "partial_trace needs a square matrix");
  int total = 1;
  for (int d : dims) {
    require(d > 0, "factor dimensions must be positive");
    total *= d;
  }
  require(total == m.rows, "factor dimensions do not match matrix size");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  require(std::adjacent_find(kept.begin(), kept.end()) == kept.end(), "duplicate kept factor");
  for (int k : kept) require(k >= 0 && k < static_cast<int>(dims.size()), "kept factor out of range");

  std::vector<int> disc;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (!std::binary_search(kept.begin(), kept.end(), i)) disc.push_back(i);

  const std::vector<int> stride = strides_of(dims);
  int keep_dim = 1, disc_dim = 1;
  for (int k : kept) keep_dim *= dims[static_cast<std::size_t>(k)];
  for (int d : disc) disc_dim *= dims[static_cast<std::size_t>(d)];

  // Flat offsets of every multi-index over the kept / discarded factors.
  auto offsets = [&](const std::vector<int>& which, int count) {
    std::vector<int> off(static_cast<std::size_t>(count), 0);
    std::vector<int> idx(which.size(), 0);
    for (int c = 0; c < count; ++c) {
      int o = 0;
      for (std::size_t f = 0; f < which.size(); ++f)
        o += idx[f] * stride[static_cast<std::size_t>(which[f])];
      off[static_cast<std::size_t>(c)] = o;
      for (int f = static_cast<int>(which.size()) - 1; f >= 0; --f) {
        if (++idx[static_cast<std::size_t>(f)] < dims[static_cast<std::size_t>(which[static_cast<std::size_t>(f)])]) break;
        idx[static_cast<std::size_t>(f)] = 0;
      }
    }
    return off;
  };
  const std::vector<int> koff = offsets(kept, keep_dim);
  const std::vector<int> doff = offsets(disc, disc_dim);

  ComplexMatrix r(keep_dim, keep_dim);
  for (int i = 0; i < keep_dim; ++i)
    for (int j = 0; j < keep_dim; ++j) {
      Complex s = 0.0;
      for (int t = 0; t < disc_dim; ++t)
        s += m(koff[static_cast<std::size_t>(i)] + doff[static_cast<std::size_t>(t)],
               koff[static_cast<std::size_t>(j)] + doff[static_cast<std::size_t>(t)]);
      r(i, j) = s;
    }
  return r;
}

ComplexMatrix permute_factors(const ComplexMatrix& m, const std::vector<int>& dims,
                              const std::vector<int>& perm) {
  require(m.is_square(), "permute_factors needs a square matrix");
  require(perm.size() == dims.size(), "permutation length mismatch");
  int total = 1;
  for (int d : dims) total *= d;
  require(total == m.rows, "factor dimensions do not match matrix size");

  const std::vector<int> in_stride = strides_of(dims);
  std::vector<int> out_dims(dims.size());
  for (std::size_t j = 0; j < perm.size(); ++j) out_dims[j] = dims[static_cast<std::size_t>(perm[j])];
  const std::vector<int> out_stride = strides_of(out_dims);

  // map[v] = flat input index of the output multi-index v
  std::vector<int> map(static_cast<std::size_t>(total), 0);
  std::vector<int> idx(dims.size(), 0);
  for (int v = 0; v < total; ++v) {
    int o = 0;
    for (std::size_t f = 0; f < perm.size(); ++f)
      o += idx[f] * in_stride[static_cast<std::size_t>(perm[f])];
    map[static_cast<std::size_t>(v)] = o;
    for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
      if (++idx[static_cast<std::size_t>(f)] < out_dims[static_cast<std::size_t>(f)]) break;
      idx[static_cast<std::size_t>(f)] = 0;
    }
  }

  ComplexMatrix r(total, total);
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j)
      r(i, j) = m(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]);
  return r;
}

namespace {

constexpr int kMaxQlSweeps = 64;

// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
// form, accumulating the unitary transform into q.
void tridiagonalize(ComplexMatrix& a, ComplexMatrix& q, std::vector<double>& diag,
                    std::vector<double>& sub) {
  const int n = a.rows;
  diag.assign(static_cast<std::size_t>(n), 0.0);
  sub.assign(static_cast<std::size_t>(n), 0.0);
  q = ComplexMatrix::identity(n);
  if (n == 1) {
    diag[0] = a(0, 0).real();
    return;
  }

  std::vector<std::vector<Complex>> reflectors;
  reflectors.reserve(static_cast<std::size_t>(n));

  for (int k = 0; k + 2 < n; ++k) {
    // column k below the diagonal
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(a(i, k));
    const double xnorm = std::sqrt(xnorm2);
    std::vector<Complex> v(static_cast<std::size_t>(n), Complex(0.0));
    if (xnorm <= kToleranceFloor * std::max(1.0, a.max_abs())) {
      reflectors.push_back(std::move(v));
      continue;
    }
    const Complex x0 = a(k + 1, k);
    const Complex phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : Complex(1.0);
    const Complex alpha = -phase * xnorm;
    for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] = a(i, k);
    v[static_cast<std::size_t>(k + 1)] -= alpha;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[static_cast<std::size_t>(i)]);
    if (vnorm2 <= 0.0) {
      reflectors.push_back(std::move(v));
      continue;
    }
    const double beta = 2.0 / vnorm2;

    // Hermitian rank-2 update of the trailing block:
    // p = beta·A·v,  w = p − (beta/2)(v*p)·v,  A ← A − v w* − w v*.
    std::vector<Complex> p(static_cast<std::size_t>(n), Complex(0.0));
    for (int i = k + 1; i < n; ++i) {
      Complex s = 0.0;
      for (int j = k + 1; j < n; ++j) s += a(i, j) * v[static_cast<std::size_t>(j)];
      p[static_cast<std::size_t>(i)] = beta * s;
    }
    Complex vp = 0.0;
    for (int i = k + 1; i < n; ++i)
      vp += std::conj(v[static_cast<std::size_t>(i)]) * p[static_cast<std::size_t>(i)];
    const Complex kappa = 0.5 * beta * vp;
    std::vector<Complex> w(static_cast<std::size_t>(n), Complex(0.0));
    for (int i = k + 1; i < n; ++i)
      w[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] - kappa * v[static_cast<std::size_t>(i)];
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a(i, j) -= v[static_cast<std::size_t>(i)] * std::conj(w[static_cast<std::size_t>(j)]) +
                   w[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);

    a(k + 1, k) = alpha;
    a(k, k + 1) = std::conj(alpha);
    for (int i = k + 2; i < n; ++i) {
      a(i, k) = 0.0;
      a(k, i) = 0.0;
    }
    // scale reflector so the update is I − v v* later
    const double sb = std::sqrt(beta);
    for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] *= sb;
    reflectors.push_back(std::move(v));
  }

  // q = H_0 H_1 ... applied to the identity, built in reverse.
  for (int k = static_cast<int>(reflectors.size()) - 1; k >= 0; --k) {
    const std::vector<Complex>& v = reflectors[static_cast<std::size_t>(k)];
    bool zero = true;
    for (int i = k + 1; i < n; ++i)
      if (v[static_cast<std::size_t>(i)] != Complex(0.0)) zero = false;
    if (zero) continue;
    for (int col = 0; col < n; ++col) {
      Complex s = 0.0;
      for (int i = k + 1; i < n; ++i) s += std::conj(v[static_cast<std::size_t>(i)]) * q(i, col);
      if (s == Complex(0.0)) continue;
      for (int i = k + 1; i < n; ++i) q(i, col) -= v[static_cast<std::size_t>(i)] * s;
    }
  }

  // Phase similarity making the subdiagonal real nonnegative.
  std::vector<Complex> ph(static_cast<std::size_t>(n), Complex(1.0));
  for (int k = 1; k < n; ++k) {
    const Complex t = a(k, k - 1);
    const double m = std::abs(t);
    ph[static_cast<std::size_t>(k)] =
        (m > 0.0) ? ph[static_cast<std::size_t>(k - 1)] * (t / m) : ph[static_cast<std::size_t>(k - 1)];
    sub[static_cast<std::size_t>(k)] = m;
  }
  for (int k = 0; k < n; ++k) {
    diag[static_cast<std::size_t>(k)] = a(k, k).real();
    for (int i = 0; i < n; ++i) q(i, k) *= ph[static_cast<std::size_t>(k)];
  }
}

// Implicit-shift QL on a real symmetric tridiagonal matrix, rotations
// accumulated into the (complex) columns of q.
void ql_implicit(std::vector<double>& d, std::vector<double>& e, ComplexMatrix& q) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i - 1)] = e[static_cast<std::size_t>(i)];
  e[static_cast<std::size_t>(n - 1)] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[static_cast<std::size_t>(m)]) + std::abs(d[static_cast<std::size_t>(m + 1)]);
        if (std::abs(e[static_cast<std::size_t>(m)]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (++iter > kMaxQlSweeps) throw NumericError("eigensolver failed to converge");
        double g = (d[static_cast<std::size_t>(l + 1)] - d[static_cast<std::size_t>(l)]) /
                   (2.0 * e[static_cast<std::size_t>(l)]);
        double r = hypot2(g, 1.0);
        g = d[static_cast<std::size_t>(m)] - d[static_cast<std::size_t>(l)] +
            e[static_cast<std::size_t>(l)] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[static_cast<std::size_t>(i)];
          const double b = c * e[static_cast<std::size_t>(i)];
          r = hypot2(f, g);
          e[static_cast<std::size_t>(i + 1)] = r;
          if (r == 0.0) {
            d[static_cast<std::size_t>(i + 1)] -= p;
            e[static_cast<std::size_t>(m)] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[static_cast<std::size_t>(i + 1)] - p;
          r = (d[static_cast<std::size_t>(i)] - g) * s + 2.0 * c * b;
          p = s * r;
          d[static_cast<std::size_t>(i + 1)] = g + p;
          g = c * r - b;
          for (int k = 0; k < q.rows; ++k) {
            const Complex qi1 = q(k, i + 1);
            const Complex qi = q(k, i);
            q(k, i + 1) = s * qi + c * qi1;
            q(k, i) = c * qi - s * qi1;
          }
        }
        if (underflow) continue;
        d[static_cast<std::size_t>(l)] -= p;
        e[static_cast<std::size_t>(l)] = g;
        e[static_cast<std::size_t>(m)] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

EigResult herm_eig(const HermitianMatrix& h) {
  const int n = h.dim();
  ComplexMatrix a = h.matrix();
  ComplexMatrix q;
  std::vector<double> d, e;
  tridiagonalize(a, q, d, e);
  ql_implicit(d, e, q);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return d[static_cast<std::size_t>(x)] > d[static_cast<std::size_t>(y)];
  });

  EigResult res;
  res.values.resize(static_cast<std::size_t>(n));
  res.vectors = ComplexMatrix(n, n);
  for (int k = 0; k < n; ++k) {
    res.values[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    for (int i = 0; i < n; ++i) res.vectors(i, k) = q(i, order[static_cast<std::size_t>(k)]);
  }
  return res;
}

double min_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  return herm_eig(h).values.back();
}

double max_eigenvalue(const HermitianMatrix& h) {
  if (h.dim() == 0) return 0.0;
  return herm_eig(h).values.front();
}

double trace_norm(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("trace_norm needs a square matrix");
  if (m.rows == 0) return 0.0;
  const HermitianMatrix gram{m.adjoint() * m, 1e-8};
  double s = 0.0;
  for (double lam : herm_eig(gram).values) s += std::sqrt(std::max(0.0, lam));
  return s;
}

std::vector<HermitianMatrix> hermitian_basis(int n) {
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    ComplexMatrix m(n, n);
    m(k, k) = 1.0;
    basis.emplace_back(m);
  }
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      ComplexMatrix s(n, n);
      s(k, l) = 1.0;
      s(l, k) = 1.0;
      basis.emplace_back(s);
      ComplexMatrix a(n, n);
      a(k, l) = Complex(0.0, 1.0);
      a(l, k) = Complex(0.0, -1.0);
      basis.emplace_back(a);
    }
  return basis;
}

HermitianMatrix hermitian_function(const HermitianMatrix& h, double (*f)(double)) {
  const EigResult eig = herm_eig(h);
  const int n = h.dim();
  ComplexMatrix r(n, n);
  for (int k = 0; k < n; ++k) {
    const double fl = f(eig.values[static_cast<std::size_t>(k)]);
    if (fl == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) += fl * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return HermitianMatrix(r, 1e-10);
}

HermitianMatrix inverse_sqrt(const HermitianMatrix& h, double rel_cutoff) {
  const EigResult eig = herm_eig(h);
  const int n = h.dim();
  const double top = eig.values.empty() ? 0.0 : eig.values.front();
  if (top <= 0.0) throw NumericError("inverse_sqrt of a non-positive matrix");
  ComplexMatrix r(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = eig.values[static_cast<std::size_t>(k)];
    if (lam <= rel_cutoff * top)
      throw NumericError("inverse_sqrt: matrix numerically singular");
    const double fl = 1.0 / std::sqrt(lam);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) += fl * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return HermitianMatrix(r, 1e-10);
}

ComplexMatrix cholesky(const HermitianMatrix& h) {
  const int n = h.dim();
  const ComplexMatrix& a = h.matrix();
  double maxdiag = kToleranceFloor;
  for (int i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::abs(a(i, i)));
  ComplexMatrix L(n, n);
  for (int j = 0; j < n; ++j) {
    double diag = a(j, j).real();
    for (int k = 0; k < j; ++k) diag -= std::norm(L(j, k));
    if (diag <= 1e-14 * maxdiag) throw NumericError("cholesky: matrix not positive definite");
    const double ljj = std::sqrt(diag);
    L(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * std::conj(L(j, k));
      L(i, j) = s / ljj;
    }
  }
  return L;
}

ComplexMatrix cholesky_solve(const ComplexMatrix& L, const ComplexMatrix& rhs) {
  const int n = L.rows;
  require(rhs.rows == n, "cholesky_solve shape mismatch");
  ComplexMatrix y(n, rhs.cols);
  // forward: L y = rhs
  for (int c = 0; c < rhs.cols; ++c)
    for (int i = 0; i < n; ++i) {
      Complex s = rhs(i, c);
      for (int k = 0; k < i; ++k) s -= L(i, k) * y(k, c);
      y(i, c) = s / L(i, i);
    }
  // backward: L* x = y
  ComplexMatrix x(n, rhs.cols);
  for (int c = 0; c < rhs.cols; ++c)
    for (int i = n - 1; i >= 0; --i) {
      Complex s = y(i, c);
      for (int k = i + 1; k < n; ++k) s -= std::conj(L(k, i)) * x(k, c);
      x(i, c) = s / std::conj(L(i, i));
    }
  return x;
}

HermitianMatrix cholesky_inverse(const HermitianMatrix& h) {
  const ComplexMatrix L = cholesky(h);
  const ComplexMatrix inv = cholesky_solve(L, ComplexMatrix::identity(h.dim()));
  return HermitianMatrix(inv, 1e-8);
}

}  // namespace witnesskit
