#include "witnesskit/compatibility.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>

namespace witnesskit {

namespace {

std::atomic<int> g_jobs{1};

// Variable-block layout of a channel program: one SDP block per Choi
// block of a channel in → out, in the dense (i, j) order of Channel.
std::vector<int> channel_block_dims(const Algebra& in, const Algebra& out) {
  std::vector<int> dims;
  for (int i = 0; i < in.num_blocks(); ++i)
    for (int j = 0; j < out.num_blocks(); ++j)
      dims.push_back(in.block_dim(i) * out.block_dim(j));
  return dims;
}

// Unitality rows: for every input block i and Hermitian basis element g,
//   Σ_j ⟨ g ⊗ I_{m_j}, J[i,j] ⟩ = tr(g).
void add_unitality_rows(SdpProblem& p, const Algebra& in, const Algebra& out, int block_offset) {
  for (int i = 0; i < in.num_blocks(); ++i) {
    const int n = in.block_dim(i);
    for (const HermitianMatrix& g : hermitian_basis(n)) {
      SdpConstraint row;
      for (int j = 0; j < out.num_blocks(); ++j) {
        const int m = out.block_dim(j);
        row.terms.emplace_back(
            block_offset + i * out.num_blocks() + j,
            HermitianMatrix(kron(g.matrix(), ComplexMatrix::identity(m)), 1e-12));
      }
      row.rhs = g.trace();
      p.add_constraint(std::move(row));
    }
  }
}

Channel channel_from_primal(const Algebra& in, const Algebra& out,
                            const std::vector<HermitianMatrix>& primal, int block_offset) {
  Channel c(in, out);
  for (int i = 0; i < in.num_blocks(); ++i)
    for (int j = 0; j < out.num_blocks(); ++j)
      c.set_choi_block(i, j,
                       primal[static_cast<std::size_t>(block_offset + i * out.num_blocks() + j)]);
  return c;
}

// Affine correction restoring exact unitality (orthogonal projection onto
// the unitality subspace).
void project_to_unitality(Channel& c) {
  double mtot = 0.0;
  for (int j = 0; j < c.output.num_blocks(); ++j) mtot += c.output.block_dim(j);
  for (int i = 0; i < c.input.num_blocks(); ++i) {
    const int n = c.input.block_dim(i);
    ComplexMatrix resid(n, n);
    for (int j = 0; j < c.output.num_blocks(); ++j)
      resid += partial_trace(c.choi_block(i, j).matrix(), {n, c.output.block_dim(j)}, {0});
    resid -= ComplexMatrix::identity(n);
    for (int j = 0; j < c.output.num_blocks(); ++j) {
      const int m = c.output.block_dim(j);
      const ComplexMatrix corr = kron((1.0 / mtot) * resid, ComplexMatrix::identity(m));
      c.set_choi_block(i, j, HermitianMatrix(c.choi_block(i, j).matrix() - corr, 1e-8));
    }
  }
}

// Lifts a margin-row operator to the joint output tensor algebra: the
// coefficient of J[i, (j1,j2)] in the stated margin functional.
ComplexMatrix lift_margin_operator(const MarginRow& row, const Algebra& out1, const Algebra& out2,
                                   int j1, int j2) {
  const ComplexMatrix& g = row.in_basis.matrix();
  const ComplexMatrix& f = row.out_basis.matrix();
  if (row.margin == 1) return kron(g, kron(f, ComplexMatrix::identity(out2.block_dim(j2))));
  return kron(g, kron(ComplexMatrix::identity(out1.block_dim(j1)), f));
}

double margin_row_value(const MarginRow& row, const Channel& c) {
  const ComplexMatrix outer = kron(row.in_basis.matrix(), row.out_basis.matrix());
  return trace_product_real(c.choi_block(row.in_block, row.out_block).matrix(), outer);
}

const AlgebraElement& effect_for_label(const Measurement& m, const std::string& label) {
  for (const auto& [l, e] : m.effects)
    if (l == label) return e;
  throw AlgebraMismatchError("task label missing from readout: " + label);
}

SdpSolution solve_or_throw(const SdpProblem& p, const char* what) {
  const SdpSolution s = solve(p);
  if (s.status == SdpStatus::numerically_degenerate)
    throw SolverError(std::string(what) + ": numerically degenerate program");
  if (s.status == SdpStatus::max_iterations)
    throw SolverError(std::string(what) + ": iteration cap reached at relative gap " +
                      std::to_string(s.relative_gap));
  return s;
}

// Objective of the posterior-information program: the guessing functional
// through both margins of the joint channel.
void add_task_objective(SdpProblem& p, const DiscriminationTask& t, const Algebra& out1,
                        const Algebra& out2) {
  const Algebra& in = t.input;
  const int nb2 = out2.num_blocks();
  for (int i = 0; i < in.num_blocks(); ++i)
    for (int j1 = 0; j1 < out1.num_blocks(); ++j1)
      for (int j2 = 0; j2 < nb2; ++j2) {
        const int dim = in.block_dim(i) * out1.block_dim(j1) * out2.block_dim(j2);
        ComplexMatrix c(dim, dim);
        for (const std::string& z : t.labels1) {
          const ComplexMatrix& e = t.ensemble.at(z).block[static_cast<std::size_t>(i)];
          const ComplexMatrix& eff =
              effect_for_label(t.readout1, z).block[static_cast<std::size_t>(j1)];
          c += kron(e.transpose(), kron(eff, ComplexMatrix::identity(out2.block_dim(j2))));
        }
        for (const std::string& z : t.labels2) {
          const ComplexMatrix& e = t.ensemble.at(z).block[static_cast<std::size_t>(i)];
          const ComplexMatrix& eff =
              effect_for_label(t.readout2, z).block[static_cast<std::size_t>(j2)];
          c += kron(e.transpose(), kron(ComplexMatrix::identity(out1.block_dim(j1)), eff));
        }
        p.set_objective(i * out1.num_blocks() * nb2 + j1 * nb2 + j2, HermitianMatrix(c, 1e-8));
      }
}

// Objective of the witness minimization: the linear part of the witness
// through the margins of the joint channel.
void add_witness_objective(SdpProblem& p, const WitnessForm& w) {
  const Algebra& in = w.input;
  const int nb2 = w.out2.num_blocks();
  for (int i = 0; i < in.num_blocks(); ++i)
    for (int j1 = 0; j1 < w.out1.num_blocks(); ++j1)
      for (int j2 = 0; j2 < nb2; ++j2) {
        const int dim = in.block_dim(i) * w.out1.block_dim(j1) * w.out2.block_dim(j2);
        ComplexMatrix c(dim, dim);
        for (const WitnessTerm& t : w.terms1)
          c += kron(t.state.block[static_cast<std::size_t>(i)].transpose(),
                    kron(t.observable.block[static_cast<std::size_t>(j1)],
                         ComplexMatrix::identity(w.out2.block_dim(j2))));
        for (const WitnessTerm& t : w.terms2)
          c += kron(t.state.block[static_cast<std::size_t>(i)].transpose(),
                    kron(ComplexMatrix::identity(w.out1.block_dim(j1)),
                         t.observable.block[static_cast<std::size_t>(j2)]));
        p.set_objective(i * w.out1.num_blocks() * nb2 + j1 * nb2 + j2, HermitianMatrix(c, 1e-8));
      }
}

}  // namespace

void set_parallel_jobs(int jobs) { g_jobs.store(std::max(1, jobs)); }

std::vector<MarginRow> margin_rows(const Algebra& in, const Algebra& out1, const Algebra& out2) {
  std::vector<MarginRow> rows;
  for (int margin = 1; margin <= 2; ++margin) {
    const Algebra& kept = (margin == 1) ? out1 : out2;
    for (int i = 0; i < in.num_blocks(); ++i)
      for (int j = 0; j < kept.num_blocks(); ++j)
        for (const HermitianMatrix& g : hermitian_basis(in.block_dim(i)))
          for (const HermitianMatrix& f : hermitian_basis(kept.block_dim(j)))
            rows.push_back({margin, i, j, g, f});
  }
  return rows;
}

CompatibilityVerdict check_compatibility(const Channel& c1, const Channel& c2,
                                         double decision_tol) {
  if (c1.input != c2.input)
    throw AlgebraMismatchError("compatibility needs a common input algebra");
  const Algebra& in = c1.input;
  const Algebra& out1 = c1.output;
  const Algebra& out2 = c2.output;
  const Algebra joint_out = tensor_algebra(out1, out2);

  const std::vector<MarginRow> rows = margin_rows(in, out1, out2);
  const int num_joint_blocks = in.num_blocks() * joint_out.num_blocks();

  // blocks: joint Choi blocks, then the slack bound e, then one
  // nonnegative slack per inequality row
  std::vector<int> dims = channel_block_dims(in, joint_out);
  const int e_block = num_joint_blocks;
  dims.push_back(1);
  const int slack_base = e_block + 1;
  for (std::size_t l = 0; l < 2 * rows.size(); ++l) dims.push_back(1);

  SdpProblem p = SdpProblem::with_blocks(dims);
  ComplexMatrix minus_one(1, 1);
  minus_one(0, 0) = -1.0;
  p.set_objective(e_block, HermitianMatrix(minus_one));

  add_unitality_rows(p, in, joint_out, 0);
  const int num_unitality = static_cast<int>(p.constraints.size());

  const int nb2 = out2.num_blocks();
  const HermitianMatrix one(ComplexMatrix::identity(1));
  const HermitianMatrix negative_one(minus_one);
  for (std::size_t l = 0; l < rows.size(); ++l) {
    const MarginRow& row = rows[l];
    const Channel& target = (row.margin == 1) ? c1 : c2;
    const double b = margin_row_value(row, target);
    for (int sign : {+1, -1}) {
      SdpConstraint c;
      for (int j1 = 0; j1 < out1.num_blocks(); ++j1)
        for (int j2 = 0; j2 < nb2; ++j2) {
          if (row.margin == 1 && j1 != row.out_block) continue;
          if (row.margin == 2 && j2 != row.out_block) continue;
          const ComplexMatrix op = lift_margin_operator(row, out1, out2, j1, j2);
          c.terms.emplace_back(row.in_block * joint_out.num_blocks() + j1 * nb2 + j2,
                               HermitianMatrix(static_cast<double>(sign) * op, 1e-12));
        }
      c.terms.emplace_back(e_block, one);
      c.terms.emplace_back(slack_base + static_cast<int>(2 * l) + (sign > 0 ? 0 : 1),
                           negative_one);
      c.rhs = sign * b;
      p.add_constraint(std::move(c));
    }
  }

  const SdpSolution sol = solve_or_throw(p, "compatibility");

  CompatibilityVerdict verdict;
  verdict.slack = std::max(0.0, -sol.primal_objective);
  verdict.compatible = verdict.slack <= decision_tol;
  verdict.inconclusive =
      verdict.slack > decision_tol && verdict.slack <= kCompatibilityInconclusiveBand;
  verdict.solver_iterations = sol.iterations;
  verdict.solver_gap = sol.relative_gap;

  Channel joint = channel_from_primal(in, joint_out, sol.primal, 0);
  project_to_unitality(joint);
  verdict.joint = std::move(joint);

  verdict.margin_multipliers.reserve(rows.size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    const double yp = sol.dual[static_cast<std::size_t>(num_unitality) + 2 * l];
    const double ym = sol.dual[static_cast<std::size_t>(num_unitality) + 2 * l + 1];
    verdict.margin_multipliers.push_back(yp - ym);
  }
  double offset = 0.0;
  for (int r = 0; r < num_unitality; ++r)
    offset +=
        sol.dual[static_cast<std::size_t>(r)] * p.constraints[static_cast<std::size_t>(r)].rhs;
  verdict.dual_offset = offset;
  return verdict;
}

double p_prior_given(const Channel& c1, const Channel& c2, const DiscriminationTask& t) {
  t.validate();
  if (c1.input != t.input || c2.input != t.input)
    throw AlgebraMismatchError("channels do not match the task input algebra");
  if (c1.output != t.readout1.algebra || c2.output != t.readout2.algebra)
    throw AlgebraMismatchError("channels do not match the task readout algebras");
  double total = 0.0;
  for (const std::string& z : t.labels1)
    total += pair_real(apply(c1, t.ensemble.at(z)), effect_for_label(t.readout1, z));
  for (const std::string& z : t.labels2)
    total += pair_real(apply(c2, t.ensemble.at(z)), effect_for_label(t.readout2, z));
  return total;
}

namespace {

double p_prior_branch(const DiscriminationTask& t, int branch) {
  const Algebra& in = t.input;
  const Measurement& readout = (branch == 1) ? t.readout1 : t.readout2;
  const std::vector<std::string>& labels = (branch == 1) ? t.labels1 : t.labels2;
  const Algebra& out = readout.algebra;

  SdpProblem p = SdpProblem::with_blocks(channel_block_dims(in, out));
  add_unitality_rows(p, in, out, 0);
  for (int i = 0; i < in.num_blocks(); ++i)
    for (int j = 0; j < out.num_blocks(); ++j) {
      const int dim = in.block_dim(i) * out.block_dim(j);
      ComplexMatrix c(dim, dim);
      for (const std::string& z : labels)
        c += kron(t.ensemble.at(z).block[static_cast<std::size_t>(i)].transpose(),
                  effect_for_label(readout, z).block[static_cast<std::size_t>(j)]);
      p.set_objective(i * out.num_blocks() + j, HermitianMatrix(c, 1e-8));
    }
  return solve_or_throw(p, "guessing-probability branch").primal_objective;
}

}  // namespace

double p_prior(const DiscriminationTask& t) {
  t.validate();
  if (g_jobs.load() > 1) {
    auto fut = std::async(std::launch::async, p_prior_branch, std::cref(t), 1);
    const double b2 = p_prior_branch(t, 2);
    return fut.get() + b2;
  }
  return p_prior_branch(t, 1) + p_prior_branch(t, 2);
}

double p_post(const DiscriminationTask& t) {
  t.validate();
  const Algebra& out1 = t.readout1.algebra;
  const Algebra& out2 = t.readout2.algebra;
  const Algebra joint_out = tensor_algebra(out1, out2);
  SdpProblem p = SdpProblem::with_blocks(channel_block_dims(t.input, joint_out));
  add_unitality_rows(p, t.input, joint_out, 0);
  add_task_objective(p, t, out1, out2);
  return solve_or_throw(p, "posterior guessing probability").primal_objective;
}

CompatibleOptimum max_over_compatible(const WitnessForm& w) {
  w.validate();
  const Algebra joint_out = tensor_algebra(w.out1, w.out2);
  SdpProblem p = SdpProblem::with_blocks(channel_block_dims(w.input, joint_out));
  add_unitality_rows(p, w.input, joint_out, 0);
  add_witness_objective(p, w);
  const SdpSolution sol = solve_or_throw(p, "witness optimization");

  Channel joint = channel_from_primal(w.input, joint_out, sol.primal, 0);
  project_to_unitality(joint);

  CompatibleOptimum opt;
  opt.min_value = w.offset - sol.primal_objective;
  opt.margin1 = margin(joint, 1, w.out1, w.out2);
  opt.margin2 = margin(joint, 2, w.out1, w.out2);
  return opt;
}

}  // namespace witnesskit
