#include "witnesskit/catalog.hpp"

#include <cmath>

namespace witnesskit {

namespace {

constexpr double kPi = 3.14159265358979323846;

ComplexMatrix column(const ComplexMatrix& basis, int x) {
  ComplexMatrix v(basis.rows, 1);
  for (int i = 0; i < basis.rows; ++i) v(i, 0) = basis(i, x);
  return v;
}

ComplexMatrix projector(const ComplexMatrix& basis, int x) {
  const ComplexMatrix v = column(basis, x);
  return v * v.adjoint();
}

void require_basis(const ComplexMatrix& basis) {
  if (!basis.is_square()) throw DimensionError("basis matrix must be square");
  const ComplexMatrix gram = basis.adjoint() * basis;
  if ((gram - ComplexMatrix::identity(basis.rows)).max_abs() > 1e-10)
    throw NumericError("basis columns are not orthonormal");
}

}  // namespace

MubPair mub_pair(int d) {
  if (d < 2) throw DimensionError("mutually unbiased pair needs d >= 2");
  MubPair p;
  p.dim = d;
  p.computational = ComplexMatrix::identity(d);
  p.fourier = ComplexMatrix(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      const double phase = 2.0 * kPi * x * y / d;
      p.fourier(y, x) = norm * Complex(std::cos(phase), std::sin(phase));
    }
  return p;
}

double gamma_threshold(int d) {
  if (d < 2) throw DimensionError("threshold needs d >= 2");
  const double rd = std::sqrt(static_cast<double>(d));
  return (rd + 2.0) / (2.0 * (rd + 1.0));
}

Measurement basis_measurement(const ComplexMatrix& basis, const std::string& label_prefix) {
  require_basis(basis);
  const Algebra q = Algebra::quantum(basis.rows);
  Measurement m;
  m.algebra = q;
  for (int x = 0; x < basis.rows; ++x)
    m.effects.emplace_back(label_prefix + std::to_string(x),
                           AlgebraElement::embed(q, 0, projector(basis, x)));
  m.validate();
  return m;
}

std::pair<Measurement, Measurement> noisy_mub_measurements(int d, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw NumericError("visibility must be in [0, 1]");
  const MubPair mub = mub_pair(d);
  const Algebra q = Algebra::quantum(d);
  auto noisy = [&](const ComplexMatrix& basis) {
    Measurement m;
    m.algebra = q;
    for (int x = 0; x < d; ++x) {
      const ComplexMatrix eff =
          gamma * projector(basis, x) + ((1.0 - gamma) / d) * ComplexMatrix::identity(d);
      m.effects.emplace_back(std::to_string(x), AlgebraElement::embed(q, 0, eff));
    }
    m.validate();
    return m;
  };
  return {noisy(mub.computational), noisy(mub.fourier)};
}

WitnessForm mub_measurement_witness(int d) {
  const MubPair mub = mub_pair(d);
  const Algebra q = Algebra::quantum(d);
  const Algebra cl = Algebra::classical(d);
  const double rd = std::sqrt(static_cast<double>(d));

  WitnessForm w;
  w.input = q;
  w.out1 = cl;
  w.out2 = cl;
  w.offset = rd * (rd + 1.0) / (2.0 * d);
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  for (int x = 0; x < d; ++x) {
    WitnessTerm t1;
    t1.state = StateFunctional::embed(q, 0, (1.0 / (2.0 * d)) * projector(mub.computational, x));
    t1.observable = AlgebraElement::embed(cl, x, one);
    w.terms1.push_back(std::move(t1));
    WitnessTerm t2;
    t2.state = StateFunctional::embed(q, 0, (1.0 / (2.0 * d)) * projector(mub.fourier, x));
    t2.observable = AlgebraElement::embed(cl, x, one);
    w.terms2.push_back(std::move(t2));
  }
  return w;
}

WitnessForm measurement_channel_witness(int d, const ComplexMatrix& h) {
  return lift_witness(mub_measurement_witness(d), basis_measurement(h), 2);
}

WitnessForm channel_pair_witness(int d, const ComplexMatrix& g, const ComplexMatrix& h) {
  const WitnessForm lifted_second = lift_witness(mub_measurement_witness(d), basis_measurement(h), 2);
  const WitnessForm lifted_both = lift_witness(lifted_second, basis_measurement(g), 1);
  return scale_witness(lifted_both, 2.0 * d);
}

WitnessForm cloning_trace_witness(int d) {
  return cloning_trace_witness(d, ComplexMatrix::identity(d));
}

WitnessForm cloning_trace_witness(int d, const ComplexMatrix& basis) {
  require_basis(basis);
  if (basis.rows != d) throw DimensionError("basis dimension mismatch");
  const Algebra q = Algebra::quantum(d);

  WitnessForm w;
  w.input = q;
  w.out1 = q;
  w.out2 = q;
  w.offset = static_cast<double>(d) * (d + 1);

  // Hilbert-Schmidt-orthonormal selfadjoint operators built on the given
  // basis; summing ⟨Φ(β), β⟩ over them yields the linear-map trace of Φ.
  std::vector<ComplexMatrix> frame;
  const double irt2 = 1.0 / std::sqrt(2.0);
  for (int x = 0; x < d; ++x) frame.push_back(projector(basis, x));
  for (int x = 0; x < d; ++x)
    for (int y = x + 1; y < d; ++y) {
      const ComplexMatrix exy = column(basis, x) * column(basis, y).adjoint();
      const ComplexMatrix eyx = column(basis, y) * column(basis, x).adjoint();
      frame.push_back(irt2 * (exy + eyx));
      frame.push_back(irt2 * (Complex(0.0, 1.0) * (exy - eyx)));
    }

  for (const ComplexMatrix& beta : frame) {
    WitnessTerm t;
    t.state = StateFunctional::embed(q, 0, beta);
    t.observable = AlgebraElement::embed(q, 0, beta);
    w.terms1.push_back(t);
    w.terms2.push_back(std::move(t));
  }
  return w;
}

std::pair<Channel, Channel> cloning_margins(int d) {
  const double g = gamma_threshold(d * d);
  return {depolarizing(d, g), depolarizing(d, g)};
}

Channel prepare_basis_channel(const Measurement& m, const ComplexMatrix& basis) {
  require_basis(basis);
  if (m.num_outcomes() != basis.rows)
    throw DimensionError("one basis vector per measurement outcome required");
  const Algebra q = Algebra::quantum(basis.rows);
  std::vector<StateFunctional> preps;
  for (int x = 0; x < basis.rows; ++x)
    preps.push_back(StateFunctional::embed(q, 0, projector(basis, x)));
  return measure_and_prepare(m, preps);
}

CloningTestOperator cloning_test_operator(int d) {
  if (d < 2) throw DimensionError("test operator needs d >= 2");
  ComplexMatrix omega(d * d, 1);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) omega(i * d + i, 0) = norm;
  const ComplexMatrix omega_proj = omega * omega.adjoint();

  ComplexMatrix flip(d * d, d * d);
  for (int u = 0; u < d; ++u)
    for (int v = 0; v < d; ++v) flip(u * d + v, v * d + u) = 1.0;

  const ComplexMatrix id_omega = kron(ComplexMatrix::identity(d), omega_proj);
  const ComplexMatrix flip_id = kron(flip, ComplexMatrix::identity(d));
  const ComplexMatrix e = flip_id * id_omega * flip_id + id_omega;

  CloningTestOperator out;
  out.op = HermitianMatrix(e, 1e-12);
  out.spectrum = herm_eig(out.op).values;
  return out;
}

}  // namespace witnesskit
