#pragma once

// Test-only cross-check solver for small SDPs: Douglas-Rachford splitting
// between the affine constraint subspace (with the linear objective folded
// into its prox) and the PSD cone. A completely different algorithm family
// from the interior-point implementation it is used to validate, so shared
// bugs are unlikely.

#include <cmath>
#include <vector>

#include "witnesskit/matrix.hpp"
#include "witnesskit/sdp.hpp"

namespace witnesskit::testutil {

struct OracleResult {
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

namespace detail {

// Dense Gaussian elimination with partial pivoting (independent of the
// library's Cholesky path).
inline std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[static_cast<std::size_t>(r) * n + col]) >
          std::abs(a[static_cast<std::size_t>(piv) * n + col]))
        piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c)
        std::swap(a[static_cast<std::size_t>(col) * n + c], a[static_cast<std::size_t>(piv) * n + c]);
      std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
    }
    const double d = a[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[static_cast<std::size_t>(r) * n + col] / d;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c) s -= a[static_cast<std::size_t>(r) * n + c] * b[static_cast<std::size_t>(c)];
    b[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * n + r];
  }
  return b;
}

}  // namespace detail

inline OracleResult admm_solve(const SdpProblem& p, double tol = 1e-7, int max_iter = 400000) {
  const int nb = p.num_blocks();
  const int m = static_cast<int>(p.constraints.size());

  // densify the rows per block
  std::vector<std::vector<ComplexMatrix>> rows(static_cast<std::size_t>(m));
  for (int l = 0; l < m; ++l) {
    for (int b = 0; b < nb; ++b)
      rows[static_cast<std::size_t>(l)].push_back(
          ComplexMatrix::zero(p.block_dims[static_cast<std::size_t>(b)],
                              p.block_dims[static_cast<std::size_t>(b)]));
    for (const auto& [k, a] : p.constraints[static_cast<std::size_t>(l)].terms)
      rows[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)] += a.matrix();
  }

  auto dot = [&](int l, const std::vector<ComplexMatrix>& x) {
    double s = 0.0;
    for (int b = 0; b < nb; ++b)
      s += trace_product_real(rows[static_cast<std::size_t>(l)][static_cast<std::size_t>(b)],
                              x[static_cast<std::size_t>(b)]);
    return s;
  };

  // Gram matrix of the rows
  std::vector<double> gram(static_cast<std::size_t>(m) * m, 0.0);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      gram[static_cast<std::size_t>(l) * m + k] = dot(l, rows[static_cast<std::size_t>(k)]);

  double cnorm = 1.0;
  for (const HermitianMatrix& c : p.objective) cnorm = std::max(cnorm, c.matrix().max_abs());
  const double t = 1.0 / cnorm;

  auto project_affine = [&](std::vector<ComplexMatrix> w) {
    std::vector<double> resid(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l)
      resid[static_cast<std::size_t>(l)] = dot(l, w) - p.constraints[static_cast<std::size_t>(l)].rhs;
    const std::vector<double> s = detail::gauss_solve(gram, resid, m);
    for (int l = 0; l < m; ++l)
      for (int b = 0; b < nb; ++b)
        w[static_cast<std::size_t>(b)] -=
            s[static_cast<std::size_t>(l)] * rows[static_cast<std::size_t>(l)][static_cast<std::size_t>(b)];
    return w;
  };

  auto project_psd = [&](const std::vector<ComplexMatrix>& w) {
    std::vector<ComplexMatrix> r;
    for (int b = 0; b < nb; ++b) {
      const EigResult eig = herm_eig(HermitianMatrix(w[static_cast<std::size_t>(b)], 1e-6));
      const int n = p.block_dims[static_cast<std::size_t>(b)];
      ComplexMatrix acc(n, n);
      for (int k = 0; k < n; ++k) {
        const double lam = eig.values[static_cast<std::size_t>(k)];
        if (lam <= 0.0) continue;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            acc(i, j) += lam * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
      }
      r.push_back(std::move(acc));
    }
    return r;
  };

  std::vector<ComplexMatrix> w;
  for (int n : p.block_dims) w.push_back(ComplexMatrix::identity(n));

  OracleResult res;
  for (int it = 0; it < max_iter; ++it) {
    // prox of (−t⟨C,·⟩ + affine indicator)
    std::vector<ComplexMatrix> shifted = w;
    for (int b = 0; b < nb; ++b)
      shifted[static_cast<std::size_t>(b)] += t * p.objective[static_cast<std::size_t>(b)].matrix();
    const std::vector<ComplexMatrix> x = project_affine(std::move(shifted));

    std::vector<ComplexMatrix> mirror(static_cast<std::size_t>(nb));
    for (int b = 0; b < nb; ++b)
      mirror[static_cast<std::size_t>(b)] = 2.0 * x[static_cast<std::size_t>(b)] - w[static_cast<std::size_t>(b)];
    const std::vector<ComplexMatrix> y = project_psd(mirror);

    double change = 0.0, scale = 1.0;
    for (int b = 0; b < nb; ++b) {
      change += (y[static_cast<std::size_t>(b)] - x[static_cast<std::size_t>(b)]).frobenius_norm();
      scale += x[static_cast<std::size_t>(b)].frobenius_norm();
      w[static_cast<std::size_t>(b)] += y[static_cast<std::size_t>(b)] - x[static_cast<std::size_t>(b)];
    }
    res.iterations = it + 1;
    if (change <= tol * scale) {
      res.converged = true;
      double obj = 0.0;
      for (int b = 0; b < nb; ++b)
        obj += trace_product_real(p.objective[static_cast<std::size_t>(b)].matrix(),
                                  x[static_cast<std::size_t>(b)]);
      res.objective = obj;
      return res;
    }
  }
  return res;
}

}  // namespace witnesskit::testutil
