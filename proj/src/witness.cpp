#include "witnesskit/witness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "witnesskit/compatibility.hpp"

namespace witnesskit {

void WitnessForm::validate() const {
  auto check_terms = [&](const std::vector<WitnessTerm>& terms, const Algebra& out) {
    for (const WitnessTerm& t : terms) {
      if (t.state.algebra != input) throw AlgebraMismatchError("witness state on wrong algebra");
      if (t.observable.algebra != out)
        throw AlgebraMismatchError("witness observable on wrong algebra");
      if (!t.state.is_selfadjoint(1e-8)) throw NumericError("witness state not selfadjoint");
      if (!t.observable.is_selfadjoint(1e-8))
        throw NumericError("witness observable not selfadjoint");
    }
  };
  check_terms(terms1, out1);
  check_terms(terms2, out2);
}

void DiscriminationTask::validate() const {
  std::set<std::string> s1(labels1.begin(), labels1.end());
  std::set<std::string> s2(labels2.begin(), labels2.end());
  if (s1.size() != labels1.size() || s2.size() != labels2.size())
    throw NumericError("task labels repeat within a branch");
  for (const std::string& z : labels1)
    if (s2.count(z)) throw NumericError("task label sets are not disjoint: " + z);

  if (ensemble.algebra != input) throw AlgebraMismatchError("ensemble on wrong algebra");
  std::set<std::string> ens;
  for (const auto& [l, st] : ensemble.members) ens.insert(l);
  std::set<std::string> all = s1;
  all.insert(s2.begin(), s2.end());
  if (ens != all) throw NumericError("ensemble labels do not match the partition");

  auto check_readout = [](const Measurement& m, const std::set<std::string>& labels) {
    std::set<std::string> got;
    for (const auto& [l, e] : m.effects) got.insert(l);
    if (got != labels) throw NumericError("readout outcomes do not match the branch labels");
  };
  check_readout(readout1, s1);
  check_readout(readout2, s2);
  ensemble.validate();
  readout1.validate(1e-8);
  readout2.validate(1e-8);
}

double evaluate(const WitnessForm& w, const Channel& c1, const Channel& c2) {
  if (c1.input != w.input || c2.input != w.input)
    throw AlgebraMismatchError("witness evaluation: input algebra mismatch");
  if (c1.output != w.out1 || c2.output != w.out2)
    throw AlgebraMismatchError("witness evaluation: output algebra mismatch");
  double linear = 0.0;
  for (const WitnessTerm& t : w.terms1) linear += pair_real(apply(c1, t.state), t.observable);
  for (const WitnessTerm& t : w.terms2) linear += pair_real(apply(c2, t.state), t.observable);
  return w.offset - linear;
}

bool detects(const WitnessForm& w, const Channel& c1, const Channel& c2) {
  return evaluate(w, c1, c2) < kDetectionThreshold;
}

WitnessForm scale_witness(const WitnessForm& w, double factor) {
  WitnessForm r = w;
  r.offset *= factor;
  for (WitnessTerm& t : r.terms1) t.state *= Complex(factor);
  for (WitnessTerm& t : r.terms2) t.state *= Complex(factor);
  return r;
}

WitnessForm tighten(const WitnessForm& w) {
  const CompatibleOptimum opt = max_over_compatible(w);
  WitnessForm r = w;
  r.offset -= opt.min_value;
  return r;
}

namespace {

// Least-squares coefficients of the observable over the readout effects,
// through the pseudo-inverse of the effect Gram matrix (cutoff 1e-10).
std::vector<double> decompose_over_effects(const AlgebraElement& observable,
                                           const Measurement& readout) {
  const int k = readout.num_outcomes();
  std::vector<std::vector<double>> eff;
  for (const auto& [l, e] : readout.effects) eff.push_back(selfadjoint_coordinates(e));
  const std::vector<double> target = selfadjoint_coordinates(observable);
  const std::size_t dim = target.size();

  ComplexMatrix gram(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double s = 0.0;
      for (std::size_t t = 0; t < dim; ++t)
        s += eff[static_cast<std::size_t>(a)][t] * eff[static_cast<std::size_t>(b)][t];
      gram(a, b) = s;
    }
  std::vector<double> rhs(static_cast<std::size_t>(k), 0.0);
  for (int a = 0; a < k; ++a) {
    double s = 0.0;
    for (std::size_t t = 0; t < dim; ++t) s += eff[static_cast<std::size_t>(a)][t] * target[t];
    rhs[static_cast<std::size_t>(a)] = s;
  }

  const EigResult eig = herm_eig(HermitianMatrix(gram, 1e-8));
  const double top = eig.values.empty() ? 0.0 : std::max(eig.values.front(), 0.0);
  std::vector<double> coeff(static_cast<std::size_t>(k), 0.0);
  for (int mode = 0; mode < k; ++mode) {
    const double lam = eig.values[static_cast<std::size_t>(mode)];
    if (lam <= 1e-10 * top) continue;
    double proj = 0.0;
    for (int a = 0; a < k; ++a)
      proj += eig.vectors(a, mode).real() * rhs[static_cast<std::size_t>(a)];
    for (int a = 0; a < k; ++a)
      coeff[static_cast<std::size_t>(a)] += eig.vectors(a, mode).real() * proj / lam;
  }

  // residual of the reconstruction
  double resid = 0.0;
  for (std::size_t t = 0; t < dim; ++t) {
    double rec = 0.0;
    for (int a = 0; a < k; ++a) rec += coeff[static_cast<std::size_t>(a)] * eff[static_cast<std::size_t>(a)][t];
    resid = std::max(resid, std::abs(rec - target[t]));
  }
  const double scale = std::max(1.0, observable.max_abs());
  if (resid > 1e-8 * scale)
    throw VerificationError("observable is outside the span of the readout effects");
  return coeff;
}

}  // namespace

WitnessTaskConversion task_from_witness(const WitnessForm& w, const Measurement& m1,
                                        const Measurement& m2) {
  w.validate();
  if (m1.algebra != w.out1 || m2.algebra != w.out2)
    throw AlgebraMismatchError("readout algebras do not match the witness slots");
  if (!is_informationally_complete(m1) || !is_informationally_complete(m2))
    throw VerificationError("task construction requires informationally complete readouts");
  std::set<std::string> l1, l2;
  for (const auto& [l, e] : m1.effects) l1.insert(l);
  for (const auto& [l, e] : m2.effects) l2.insert(l);
  for (const std::string& z : l1)
    if (l2.count(z)) throw NumericError("readout labels are not disjoint: " + z);

  // expand the linear part over the readout effects:
  // Σ_r state_r ⊗ obs_r = Σ_z a(z) ⊗ M(z) per slot
  auto slot_states = [&](const std::vector<WitnessTerm>& terms, const Measurement& m) {
    std::vector<StateFunctional> a(static_cast<std::size_t>(m.num_outcomes()),
                                   StateFunctional::zero(w.input));
    for (const WitnessTerm& t : terms) {
      const std::vector<double> c = decompose_over_effects(t.observable, m);
      for (int z = 0; z < m.num_outcomes(); ++z)
        a[static_cast<std::size_t>(z)] += c[static_cast<std::size_t>(z)] * t.state;
    }
    return a;
  };
  const std::vector<StateFunctional> a1 = slot_states(w.terms1, m1);
  const std::vector<StateFunctional> a2 = slot_states(w.terms2, m2);

  const StateFunctional base = trace_state(w.input);
  const double n_total = static_cast<double>(w.input.total_hilbert_dim());
  double max_norm = 0.0;
  for (const StateFunctional& a : a1) max_norm = std::max(max_norm, a.norm());
  for (const StateFunctional& a : a2) max_norm = std::max(max_norm, a.norm());
  const double beta = 2.0 * n_total * max_norm + 1.0;

  double alpha = 0.0;
  for (const StateFunctional& a : a1) alpha += beta + a.total_trace().real();
  for (const StateFunctional& a : a2) alpha += beta + a.total_trace().real();

  WitnessTaskConversion out;
  out.alpha = alpha;
  out.delta = (w.offset + 2.0 * beta) / alpha;

  DiscriminationTask task;
  task.input = w.input;
  task.ensemble.algebra = w.input;
  for (int z = 0; z < m1.num_outcomes(); ++z) {
    task.labels1.push_back(m1.label(z));
    task.ensemble.members.emplace_back(
        m1.label(z), (1.0 / alpha) * (beta * base + a1[static_cast<std::size_t>(z)]));
  }
  for (int z = 0; z < m2.num_outcomes(); ++z) {
    task.labels2.push_back(m2.label(z));
    task.ensemble.members.emplace_back(
        m2.label(z), (1.0 / alpha) * (beta * base + a2[static_cast<std::size_t>(z)]));
  }
  task.readout1 = m1;
  task.readout2 = m2;
  task.validate();
  out.task = std::move(task);
  return out;
}

WitnessForm witness_from_task(const DiscriminationTask& t) {
  t.validate();
  const double prior = p_prior(t);
  const double post = p_post(t);
  if (prior <= post + 1e-6)
    throw VerificationError("task does not witness incompatibility: no prior/post gap");

  WitnessForm w;
  w.input = t.input;
  w.out1 = t.readout1.algebra;
  w.out2 = t.readout2.algebra;
  w.offset = post;
  for (const std::string& z : t.labels1) {
    WitnessTerm term;
    term.state = t.ensemble.at(z);
    for (const auto& [l, e] : t.readout1.effects)
      if (l == z) term.observable = e;
    w.terms1.push_back(std::move(term));
  }
  for (const std::string& z : t.labels2) {
    WitnessTerm term;
    term.state = t.ensemble.at(z);
    for (const auto& [l, e] : t.readout2.effects)
      if (l == z) term.observable = e;
    w.terms2.push_back(std::move(term));
  }
  return w;
}

WitnessForm witness_from_incompatible_pair(const Channel& c1, const Channel& c2,
                                           std::uint64_t seed) {
  const CompatibilityVerdict verdict = check_compatibility(c1, c2);
  if (verdict.slack <= kCompatibilityInconclusiveBand)
    throw VerificationError("pair is compatible within solver tolerance; no witness exists");

  const std::vector<MarginRow> rows = margin_rows(c1.input, c1.output, c2.output);
  WitnessForm w;
  w.input = c1.input;
  w.out1 = c1.output;
  w.out2 = c2.output;
  w.offset = verdict.dual_offset;
  for (std::size_t l = 0; l < rows.size(); ++l) {
    const double lambda = verdict.margin_multipliers[l];
    if (std::abs(lambda) <= 1e-13) continue;
    const MarginRow& row = rows[l];
    WitnessTerm term;
    term.state = StateFunctional::embed(w.input, row.in_block,
                                        Complex(-lambda) * row.in_basis.matrix().transpose());
    const Algebra& out = (row.margin == 1) ? w.out1 : w.out2;
    term.observable = AlgebraElement::embed(out, row.out_block, row.out_basis.matrix());
    ((row.margin == 1) ? w.terms1 : w.terms2).push_back(std::move(term));
  }

  // The dual-derived functional is a heuristic; re-verify before returning.
  WitnessForm tight = tighten(w);
  const double at_pair = evaluate(tight, c1, c2);
  if (at_pair >= -verdict.slack / 2)
    throw VerificationError("dual extraction degenerate: witness misses the input pair");

  Rng rng(seed);
  const Algebra joint_out = tensor_algebra(w.out1, w.out2);
  for (int rep = 0; rep < 50; ++rep) {
    const Channel joint = random_channel(w.input, joint_out, rng);
    const double v = evaluate(tight, margin(joint, 1, w.out1, w.out2),
                              margin(joint, 2, w.out1, w.out2));
    if (v < -1e-6)
      throw VerificationError("dual extraction degenerate: negative on a compatible pair");
  }
  return tight;
}

WitnessForm lift_witness(const WitnessForm& w, const Measurement& projective, int slot) {
  if (slot != 1 && slot != 2) throw DimensionError("witness slot must be 1 or 2");
  w.validate();
  projective.validate(1e-10);
  const Algebra& classical_out = (slot == 1) ? w.out1 : w.out2;
  if (!is_abelian(classical_out) || classical_out.num_blocks() != projective.num_outcomes())
    throw AlgebraMismatchError("lift needs a classical slot matching the projection count");
  for (const auto& [l, e] : projective.effects) {
    double trace = 0.0;
    double idem = 0.0;
    for (const ComplexMatrix& b : e.block) {
      trace += b.trace().real();
      idem = std::max(idem, (b * b - b).max_abs());
    }
    if (idem > 1e-10 * std::max(1.0, e.max_abs()))
      throw VerificationError("lift requires projection effects: " + l);
    if (trace <= 1e-10) throw VerificationError("lift requires nonzero projections: " + l);
  }

  WitnessForm r = w;
  std::vector<WitnessTerm>& terms = (slot == 1) ? r.terms1 : r.terms2;
  for (WitnessTerm& t : terms) {
    AlgebraElement lifted = AlgebraElement::zero(projective.algebra);
    for (int x = 0; x < projective.num_outcomes(); ++x) {
      const double weight = t.observable.block[static_cast<std::size_t>(x)](0, 0).real();
      if (weight == 0.0) continue;
      lifted += weight * projective.effect(x);
    }
    t.observable = std::move(lifted);
  }
  ((slot == 1) ? r.out1 : r.out2) = projective.algebra;
  return r;
}

}  // namespace witnesskit
