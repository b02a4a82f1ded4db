#include "witnesskit/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace witnesskit {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kGapTarget = 1e-8;
constexpr double kFeasTarget = 1e-10;
constexpr double kRowDropThreshold = 1e-10;
constexpr double kStepFraction = 0.98;

std::function<void(const SdpProblem&, const SdpSolution&)>& observer() {
  static std::function<void(const SdpProblem&, const SdpSolution&)> cb;
  return cb;
}

struct SparseEntry {
  int block;
  int row;
  int col;
  Complex val;
};

struct SparseRow {
  std::vector<SparseEntry> entries;
  std::vector<int> blocks;  // touched blocks, ascending
  double rhs = 0.0;
  int original_index = -1;
};

// ⟨A_l, M⟩ for block-diagonal dense M.
double row_dot(const SparseRow& row, const std::vector<ComplexMatrix>& m) {
  Complex s = 0.0;
  for (const SparseEntry& e : row.entries)
    s += e.val * m[static_cast<std::size_t>(e.block)](e.col, e.row);
  return s.real();
}

}  // namespace

SdpProblem SdpProblem::with_blocks(std::vector<int> dims) {
  SdpProblem p;
  p.block_dims = std::move(dims);
  for (int n : p.block_dims) {
    if (n <= 0) throw DimensionError("SDP block dims must be positive");
    p.objective.push_back(HermitianMatrix::zero(n));
  }
  return p;
}

void SdpProblem::set_objective(int block, HermitianMatrix c) {
  if (c.dim() != block_dims[static_cast<std::size_t>(block)])
    throw DimensionError("objective block dimension mismatch");
  objective[static_cast<std::size_t>(block)] = std::move(c);
}

void SdpProblem::add_constraint(int block, HermitianMatrix a, double rhs) {
  SdpConstraint c;
  c.terms.emplace_back(block, std::move(a));
  c.rhs = rhs;
  add_constraint(std::move(c));
}

void SdpProblem::add_constraint(SdpConstraint c) {
  for (const auto& [k, a] : c.terms) {
    if (k < 0 || k >= num_blocks()) throw DimensionError("constraint touches unknown block");
    if (a.dim() != block_dims[static_cast<std::size_t>(k)])
      throw DimensionError("constraint block dimension mismatch");
  }
  constraints.push_back(std::move(c));
}

namespace {

std::vector<SparseRow> sparsify(const SdpProblem& p) {
  std::vector<SparseRow> rows;
  rows.reserve(p.constraints.size());
  for (std::size_t l = 0; l < p.constraints.size(); ++l) {
    SparseRow row;
    row.rhs = p.constraints[l].rhs;
    row.original_index = static_cast<int>(l);
    for (const auto& [k, a] : p.constraints[l].terms) {
      bool touched = false;
      for (int r = 0; r < a.dim(); ++r)
        for (int c = 0; c < a.dim(); ++c) {
          const Complex v = a(r, c);
          if (v != Complex(0.0)) {
            row.entries.push_back({k, r, c, v});
            touched = true;
          }
        }
      if (touched) row.blocks.push_back(k);
    }
    std::sort(row.blocks.begin(), row.blocks.end());
    row.blocks.erase(std::unique(row.blocks.begin(), row.blocks.end()), row.blocks.end());
    rows.push_back(std::move(row));
  }
  return rows;
}

// Full real-coordinate vector of a row (isometric for the trace product).
std::vector<double> row_vector(const std::vector<int>& dims, const std::vector<int>& offsets,
                               int total, const SparseRow& row) {
  std::vector<double> v(static_cast<std::size_t>(total), 0.0);
  const double rt2 = std::sqrt(2.0);
  for (const SparseEntry& e : row.entries) {
    const int n = dims[static_cast<std::size_t>(e.block)];
    const int base = offsets[static_cast<std::size_t>(e.block)];
    if (e.row == e.col) {
      v[static_cast<std::size_t>(base + e.row)] += e.val.real();
    } else if (e.row < e.col) {
      const int tri = e.row * (2 * n - e.row - 1) / 2 + (e.col - e.row - 1);
      v[static_cast<std::size_t>(base + n + 2 * tri)] += rt2 * e.val.real();
      v[static_cast<std::size_t>(base + n + 2 * tri + 1)] += rt2 * e.val.imag();
    }
    // lower-triangle entries of a Hermitian coefficient mirror the upper
    // ones and are accounted for by the factor √2
  }
  return v;
}

// Modified Gram-Schmidt removal of dependent rows; keeps track of the
// orthonormalized right-hand sides so inconsistent duplicates are caught.
std::vector<int> preprocess_rows(const std::vector<int>& dims, const std::vector<SparseRow>& rows,
                                 bool* inconsistent) {
  *inconsistent = false;
  std::vector<int> offsets(dims.size());
  int total = 0;
  for (std::size_t b = 0; b < dims.size(); ++b) {
    offsets[b] = total;
    total += dims[b] * dims[b];
  }
  std::vector<std::vector<double>> basis;
  std::vector<double> basis_rhs;
  std::vector<int> kept;
  double rhs_scale = 1.0;
  for (const SparseRow& r : rows) rhs_scale = std::max(rhs_scale, std::abs(r.rhs));

  for (std::size_t l = 0; l < rows.size(); ++l) {
    std::vector<double> w = row_vector(dims, offsets, total, rows[l]);
    double norm0 = 0.0;
    for (double x : w) norm0 += x * x;
    norm0 = std::sqrt(norm0);
    double b = rows[l].rhs;
    for (std::size_t q = 0; q < basis.size(); ++q) {
      double c = 0.0;
      for (int t = 0; t < total; ++t)
        c += w[static_cast<std::size_t>(t)] * basis[q][static_cast<std::size_t>(t)];
      for (int t = 0; t < total; ++t)
        w[static_cast<std::size_t>(t)] -= c * basis[q][static_cast<std::size_t>(t)];
      b -= c * basis_rhs[q];
    }
    double norm1 = 0.0;
    for (double x : w) norm1 += x * x;
    norm1 = std::sqrt(norm1);
    if (norm1 > kRowDropThreshold * std::max(1.0, norm0)) {
      for (double& x : w) x /= norm1;
      basis.push_back(std::move(w));
      basis_rhs.push_back(b / norm1);
      kept.push_back(static_cast<int>(l));
    } else if (std::abs(b) > 1e-8 * rhs_scale) {
      *inconsistent = true;
      return kept;
    }
  }
  return kept;
}

ComplexMatrix forward_solve(const ComplexMatrix& L, const ComplexMatrix& b) {
  ComplexMatrix y(b.rows, b.cols);
  for (int c = 0; c < b.cols; ++c)
    for (int i = 0; i < b.rows; ++i) {
      Complex s = b(i, c);
      for (int k = 0; k < i; ++k) s -= L(i, k) * y(k, c);
      y(i, c) = s / L(i, i);
    }
  return y;
}

// Largest α with M + α·D ⪰ 0, through the Cholesky factor of M.
double step_to_boundary(const ComplexMatrix& L, const ComplexMatrix& d) {
  const ComplexMatrix w = forward_solve(L, forward_solve(L, d).adjoint());
  const double lam = min_eigenvalue(HermitianMatrix(0.5 * (w + w.adjoint()), 1e-6));
  if (lam >= -1e-14) return std::numeric_limits<double>::infinity();
  return -1.0 / lam;
}

struct RealCholesky {
  // dense real symmetric PD factorization, row-major lower factor
  std::vector<double> l;
  int n = 0;

  bool factor(const std::vector<double>& m, int dim, double jitter) {
    n = dim;
    l.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
      double diag = m[static_cast<std::size_t>(j) * n + j] + jitter;
      for (int k = 0; k < j; ++k) diag -= l[static_cast<std::size_t>(j) * n + k] * l[static_cast<std::size_t>(j) * n + k];
      if (diag <= 0.0 || !std::isfinite(diag)) return false;
      const double d = std::sqrt(diag);
      l[static_cast<std::size_t>(j) * n + j] = d;
      for (int i = j + 1; i < n; ++i) {
        double s = m[static_cast<std::size_t>(i) * n + j];
        for (int k = 0; k < j; ++k)
          s -= l[static_cast<std::size_t>(i) * n + k] * l[static_cast<std::size_t>(j) * n + k];
        l[static_cast<std::size_t>(i) * n + j] = s / d;
      }
    }
    return true;
  }

  std::vector<double> solve(std::vector<double> b) const {
    for (int i = 0; i < n; ++i) {
      double s = b[static_cast<std::size_t>(i)];
      for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(k)];
      b[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = b[static_cast<std::size_t>(i)];
      for (int k = i + 1; k < n; ++k) s -= l[static_cast<std::size_t>(k) * n + i] * b[static_cast<std::size_t>(k)];
      b[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * n + i];
    }
    return b;
  }
};

ComplexMatrix hermitize(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

SdpSolution solve(const SdpProblem& p) {
  const int nb = p.num_blocks();
  if (nb == 0) throw SolverError("SDP without variable blocks");
  if (p.constraints.empty()) throw SolverError("SDP without constraints");

  const std::vector<SparseRow> all_rows = sparsify(p);
  bool inconsistent = false;
  const std::vector<int> kept = preprocess_rows(p.block_dims, all_rows, &inconsistent);

  SdpSolution sol;
  sol.dual.assign(p.constraints.size(), 0.0);
  for (int n : p.block_dims) sol.primal.push_back(HermitianMatrix::zero(n));
  if (inconsistent || kept.empty()) {
    sol.status = SdpStatus::numerically_degenerate;
    if (observer()) observer()(p, sol);
    return sol;
  }

  std::vector<SparseRow> rows;
  rows.reserve(kept.size());
  for (int l : kept) rows.push_back(all_rows[static_cast<std::size_t>(l)]);
  const int m = static_cast<int>(rows.size());

  int ntot = 0;
  for (int n : p.block_dims) ntot += n;

  double bnorm = 0.0;
  for (const SparseRow& r : rows) bnorm = std::max(bnorm, std::abs(r.rhs));
  double anorm = 0.0;
  for (const SparseRow& r : rows) {
    double f = 0.0;
    for (const SparseEntry& e : r.entries) f += std::norm(e.val);
    anorm = std::max(anorm, std::sqrt(f));
  }
  double cnorm = 0.0;
  for (const HermitianMatrix& c : p.objective)
    cnorm = std::max(cnorm, c.matrix().frobenius_norm());

  const double xscale =
      std::max({10.0, std::sqrt(static_cast<double>(ntot)),
                static_cast<double>(ntot) * bnorm / (1.0 + anorm)});
  const double zscale = std::max({10.0, std::sqrt(static_cast<double>(ntot)), anorm, cnorm});

  std::vector<ComplexMatrix> X, Z;
  for (int n : p.block_dims) {
    X.push_back(xscale * ComplexMatrix::identity(n));
    Z.push_back(zscale * ComplexMatrix::identity(n));
  }
  std::vector<double> y(static_cast<std::size_t>(m), 0.0);

  double best_score = std::numeric_limits<double>::infinity();
  std::vector<ComplexMatrix> bestX = X;
  std::vector<double> besty = y;
  double best_pobj = 0.0, best_dobj = 0.0, best_rp = 0.0, best_relgap = 0.0;
  bool converged = false;
  int iterations = 0;
  bool numeric_failure = false;

  for (int it = 0; it < kMaxIterations; ++it) {
    iterations = it;
    // residuals and objectives
    std::vector<double> rp(static_cast<std::size_t>(m));
    double rp_max = 0.0;
    for (int l = 0; l < m; ++l) {
      rp[static_cast<std::size_t>(l)] =
          rows[static_cast<std::size_t>(l)].rhs - row_dot(rows[static_cast<std::size_t>(l)], X);
      rp_max = std::max(rp_max, std::abs(rp[static_cast<std::size_t>(l)]));
    }
    std::vector<ComplexMatrix> Rd;
    double rd_max = 0.0;
    for (int b = 0; b < nb; ++b)
      Rd.push_back(p.objective[static_cast<std::size_t>(b)].matrix() + Z[static_cast<std::size_t>(b)]);
    for (int l = 0; l < m; ++l)
      for (const SparseEntry& e : rows[static_cast<std::size_t>(l)].entries)
        Rd[static_cast<std::size_t>(e.block)](e.row, e.col) -= y[static_cast<std::size_t>(l)] * e.val;
    for (int b = 0; b < nb; ++b) rd_max = std::max(rd_max, Rd[static_cast<std::size_t>(b)].max_abs());

    double pobj = 0.0;
    for (int b = 0; b < nb; ++b)
      pobj += trace_product_real(p.objective[static_cast<std::size_t>(b)].matrix(),
                                 X[static_cast<std::size_t>(b)]);
    double dobj = 0.0;
    for (int l = 0; l < m; ++l) dobj += y[static_cast<std::size_t>(l)] * rows[static_cast<std::size_t>(l)].rhs;

    double mu = 0.0;
    for (int b = 0; b < nb; ++b)
      mu += trace_product_real(X[static_cast<std::size_t>(b)], Z[static_cast<std::size_t>(b)]);
    mu /= ntot;

    const double relgap = std::abs(dobj - pobj) / (1.0 + std::max(std::abs(pobj), std::abs(dobj)));
    const double rp_rel = rp_max / (1.0 + bnorm);
    const double rd_rel = rd_max / (1.0 + cnorm);
    const double score = std::max({relgap, rp_rel, rd_rel});
    if (score < best_score) {
      best_score = score;
      bestX = X;
      besty = y;
      best_pobj = pobj;
      best_dobj = dobj;
      best_rp = rp_max;
      best_relgap = relgap;
    }
    if (relgap <= kGapTarget && rp_rel <= kFeasTarget && rd_rel <= kFeasTarget) {
      converged = true;
      break;
    }

    // factorizations
    std::vector<ComplexMatrix> Lx(static_cast<std::size_t>(nb)), Lz(static_cast<std::size_t>(nb)),
        Zi(static_cast<std::size_t>(nb));
    bool factor_ok = true;
    for (int b = 0; b < nb && factor_ok; ++b) {
      try {
        Lx[static_cast<std::size_t>(b)] = cholesky(HermitianMatrix(X[static_cast<std::size_t>(b)], 1e-6));
        Lz[static_cast<std::size_t>(b)] = cholesky(HermitianMatrix(Z[static_cast<std::size_t>(b)], 1e-6));
        Zi[static_cast<std::size_t>(b)] =
            cholesky_solve(Lz[static_cast<std::size_t>(b)],
                           ComplexMatrix::identity(p.block_dims[static_cast<std::size_t>(b)]))
                ;
        Zi[static_cast<std::size_t>(b)] = hermitize(Zi[static_cast<std::size_t>(b)]);
      } catch (const NumericError&) {
        factor_ok = false;
      }
    }
    if (!factor_ok) {
      numeric_failure = true;
      break;
    }

    // Schur complement M_{lk} = Re tr(A_l · X A_k Z⁻¹)
    std::vector<std::vector<ComplexMatrix>> G(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      for (int b : rows[static_cast<std::size_t>(k)].blocks) {
        const int n = p.block_dims[static_cast<std::size_t>(b)];
        ComplexMatrix a(n, n);
        for (const SparseEntry& e : rows[static_cast<std::size_t>(k)].entries)
          if (e.block == b) a(e.row, e.col) = e.val;
        G[static_cast<std::size_t>(k)].push_back(X[static_cast<std::size_t>(b)] * a *
                                                 Zi[static_cast<std::size_t>(b)]);
      }
    }
    std::vector<double> M(static_cast<std::size_t>(m) * m, 0.0);
    for (int l = 0; l < m; ++l) {
      for (int k = 0; k < m; ++k) {
        // blocks touched by both rows
        double s = 0.0;
        const auto& lb = rows[static_cast<std::size_t>(l)].blocks;
        const auto& kb = rows[static_cast<std::size_t>(k)].blocks;
        std::size_t bi = 0;
        for (std::size_t ki = 0; ki < kb.size(); ++ki) {
          while (bi < lb.size() && lb[bi] < kb[ki]) ++bi;
          if (bi >= lb.size()) break;
          if (lb[bi] != kb[ki]) continue;
          const ComplexMatrix& g = G[static_cast<std::size_t>(k)][ki];
          for (const SparseEntry& e : rows[static_cast<std::size_t>(l)].entries)
            if (e.block == kb[ki])
              s += (e.val * g(e.col, e.row)).real();
        }
        M[static_cast<std::size_t>(l) * m + k] = s;
      }
    }
    for (int l = 0; l < m; ++l)
      for (int k = l + 1; k < m; ++k) {
        const double avg = 0.5 * (M[static_cast<std::size_t>(l) * m + k] + M[static_cast<std::size_t>(k) * m + l]);
        M[static_cast<std::size_t>(l) * m + k] = avg;
        M[static_cast<std::size_t>(k) * m + l] = avg;
      }

    RealCholesky chol;
    double maxdiag = 0.0;
    for (int l = 0; l < m; ++l) maxdiag = std::max(maxdiag, M[static_cast<std::size_t>(l) * m + l]);
    bool chol_ok = false;
    for (double jitter : {0.0, 1e-14 * maxdiag, 1e-11 * maxdiag, 1e-8 * maxdiag}) {
      if (chol.factor(M, m, jitter)) {
        chol_ok = true;
        break;
      }
    }
    if (!chol_ok) {
      numeric_failure = true;
      break;
    }

    // predictor (affine scaling) direction
    std::vector<ComplexMatrix> P1;  // X Rd Z⁻¹
    for (int b = 0; b < nb; ++b)
      P1.push_back(X[static_cast<std::size_t>(b)] * Rd[static_cast<std::size_t>(b)] *
                   Zi[static_cast<std::size_t>(b)]);
    std::vector<double> rhs(static_cast<std::size_t>(m));
    for (int l = 0; l < m; ++l)
      rhs[static_cast<std::size_t>(l)] =
          row_dot(rows[static_cast<std::size_t>(l)], P1) - rows[static_cast<std::size_t>(l)].rhs;
    const std::vector<double> dya = chol.solve(rhs);

    std::vector<ComplexMatrix> dZa, dXa;
    for (int b = 0; b < nb; ++b) {
      ComplexMatrix t = Complex(-1.0) * Rd[static_cast<std::size_t>(b)];
      dZa.push_back(std::move(t));
    }
    for (int l = 0; l < m; ++l)
      for (const SparseEntry& e : rows[static_cast<std::size_t>(l)].entries)
        dZa[static_cast<std::size_t>(e.block)](e.row, e.col) += dya[static_cast<std::size_t>(l)] * e.val;
    for (int b = 0; b < nb; ++b) {
      const ComplexMatrix raw =
          Complex(-1.0) * X[static_cast<std::size_t>(b)] -
          X[static_cast<std::size_t>(b)] * dZa[static_cast<std::size_t>(b)] * Zi[static_cast<std::size_t>(b)];
      dXa.push_back(hermitize(raw));
    }

    auto max_step = [&](const std::vector<ComplexMatrix>& L,
                        const std::vector<ComplexMatrix>& D) {
      double a = std::numeric_limits<double>::infinity();
      for (int b = 0; b < nb; ++b)
        a = std::min(a, step_to_boundary(L[static_cast<std::size_t>(b)], D[static_cast<std::size_t>(b)]));
      return a;
    };
    const double ap_aff = std::min(1.0, kStepFraction * max_step(Lx, dXa));
    const double ad_aff = std::min(1.0, kStepFraction * max_step(Lz, dZa));

    double mu_aff = 0.0;
    for (int b = 0; b < nb; ++b) {
      const ComplexMatrix xa = X[static_cast<std::size_t>(b)] + ap_aff * dXa[static_cast<std::size_t>(b)];
      const ComplexMatrix za = Z[static_cast<std::size_t>(b)] + ad_aff * dZa[static_cast<std::size_t>(b)];
      mu_aff += trace_product_real(xa, za);
    }
    mu_aff = std::max(mu_aff / ntot, 0.0);
    double sigma = std::pow(mu_aff / mu, 3.0);
    sigma = std::clamp(sigma, 1e-12, 1.0);

    // corrector
    std::vector<ComplexMatrix> P2;  // (σμ I − dXa dZa) Z⁻¹ + X Rd Z⁻¹
    for (int b = 0; b < nb; ++b) {
      const ComplexMatrix corr = dXa[static_cast<std::size_t>(b)] * dZa[static_cast<std::size_t>(b)];
      ComplexMatrix t = (sigma * mu) * Zi[static_cast<std::size_t>(b)] -
                        corr * Zi[static_cast<std::size_t>(b)] + P1[static_cast<std::size_t>(b)];
      P2.push_back(std::move(t));
    }
    for (int l = 0; l < m; ++l)
      rhs[static_cast<std::size_t>(l)] =
          row_dot(rows[static_cast<std::size_t>(l)], P2) - rows[static_cast<std::size_t>(l)].rhs;
    const std::vector<double> dy = chol.solve(rhs);

    std::vector<ComplexMatrix> dZ, dX;
    for (int b = 0; b < nb; ++b) dZ.push_back(Complex(-1.0) * Rd[static_cast<std::size_t>(b)]);
    for (int l = 0; l < m; ++l)
      for (const SparseEntry& e : rows[static_cast<std::size_t>(l)].entries)
        dZ[static_cast<std::size_t>(e.block)](e.row, e.col) += dy[static_cast<std::size_t>(l)] * e.val;
    for (int b = 0; b < nb; ++b) {
      const ComplexMatrix corr = dXa[static_cast<std::size_t>(b)] * dZa[static_cast<std::size_t>(b)];
      const ComplexMatrix raw =
          (sigma * mu) * Zi[static_cast<std::size_t>(b)] - corr * Zi[static_cast<std::size_t>(b)] -
          X[static_cast<std::size_t>(b)] -
          X[static_cast<std::size_t>(b)] * dZ[static_cast<std::size_t>(b)] * Zi[static_cast<std::size_t>(b)];
      dX.push_back(hermitize(raw));
    }

    const double ap = std::min(1.0, kStepFraction * max_step(Lx, dX));
    const double ad = std::min(1.0, kStepFraction * max_step(Lz, dZ));

    for (int b = 0; b < nb; ++b) {
      X[static_cast<std::size_t>(b)] += ap * dX[static_cast<std::size_t>(b)];
      X[static_cast<std::size_t>(b)] = hermitize(X[static_cast<std::size_t>(b)]);
      Z[static_cast<std::size_t>(b)] += ad * dZ[static_cast<std::size_t>(b)];
      Z[static_cast<std::size_t>(b)] = hermitize(Z[static_cast<std::size_t>(b)]);
    }
    for (int l = 0; l < m; ++l) y[static_cast<std::size_t>(l)] += ad * dy[static_cast<std::size_t>(l)];
  }

  // package the best iterate
  sol.iterations = iterations;
  for (int b = 0; b < nb; ++b)
    sol.primal[static_cast<std::size_t>(b)] = HermitianMatrix(bestX[static_cast<std::size_t>(b)], 1e-6);
  for (int l = 0; l < m; ++l)
    sol.dual[static_cast<std::size_t>(rows[static_cast<std::size_t>(l)].original_index)] =
        besty[static_cast<std::size_t>(l)];
  sol.primal_objective = best_pobj;
  sol.dual_objective = best_dobj;
  sol.gap = best_dobj - best_pobj;
  sol.relative_gap = best_relgap;
  sol.constraint_residual = best_rp;
  double mineig = 0.0;
  for (int b = 0; b < nb; ++b)
    mineig = std::min(mineig, min_eigenvalue(sol.primal[static_cast<std::size_t>(b)]));
  sol.min_primal_eigenvalue = mineig;

  if (converged || (best_relgap <= 1e-7 && best_rp <= 1e-8 && mineig >= -1e-9))
    sol.status = SdpStatus::optimal;
  else if (numeric_failure)
    sol.status = SdpStatus::numerically_degenerate;
  else
    sol.status = SdpStatus::max_iterations;

  if (observer()) observer()(p, sol);
  return sol;
}

SdpVerifyReport verify(const SdpProblem& p, const SdpSolution& s) {
  SdpVerifyReport rep;
  const std::vector<SparseRow> rows = sparsify(p);

  std::vector<ComplexMatrix> X;
  for (const HermitianMatrix& x : s.primal) X.push_back(x.matrix());
  for (const SparseRow& r : rows)
    rep.constraint_residual = std::max(rep.constraint_residual, std::abs(r.rhs - row_dot(r, X)));

  rep.min_primal_eigenvalue = 0.0;
  for (const HermitianMatrix& x : s.primal)
    rep.min_primal_eigenvalue = std::min(rep.min_primal_eigenvalue, min_eigenvalue(x));

  // dual slack Σ_l y_l A_l − C
  std::vector<ComplexMatrix> slack;
  for (int b = 0; b < p.num_blocks(); ++b)
    slack.push_back(Complex(-1.0) * p.objective[static_cast<std::size_t>(b)].matrix());
  for (std::size_t l = 0; l < rows.size(); ++l)
    for (const SparseEntry& e : rows[l].entries)
      slack[static_cast<std::size_t>(e.block)](e.row, e.col) +=
          s.dual[static_cast<std::size_t>(rows[l].original_index)] * e.val;
  rep.min_dual_slack_eigenvalue = 0.0;
  for (const ComplexMatrix& z : slack)
    rep.min_dual_slack_eigenvalue =
        std::min(rep.min_dual_slack_eigenvalue, min_eigenvalue(HermitianMatrix(z, 1e-6)));

  const double scale = 1.0 + std::max(std::abs(s.primal_objective), std::abs(s.dual_objective));
  rep.weak_duality_margin = s.dual_objective - s.primal_objective + std::abs(s.gap) + 1e-7 * scale;
  rep.ok = rep.constraint_residual <= 1e-8 * scale && rep.min_primal_eigenvalue >= -1e-9 &&
           rep.min_dual_slack_eigenvalue >= -1e-7 * scale && rep.weak_duality_margin >= 0.0;
  return rep;
}

void set_solve_observer(std::function<void(const SdpProblem&, const SdpSolution&)> cb) {
  observer() = std::move(cb);
}

}  // namespace witnesskit
