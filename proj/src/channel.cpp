#include "witnesskit/channel.hpp"

#include <algorithm>
#include <cmath>

namespace witnesskit {

namespace {

// Φ_{ji}(x) for an arbitrary (not necessarily Hermitian) input block x,
// read off the Choi block: result[k,l] = Σ_{u,v} x[u,v]·C[(u,k),(v,l)].
ComplexMatrix apply_component(const ComplexMatrix& c, int n_in, int m_out,
                              const ComplexMatrix& x) {
  ComplexMatrix r(m_out, m_out);
  for (int u = 0; u < n_in; ++u)
    for (int v = 0; v < n_in; ++v) {
      const Complex xuv = x(u, v);
      if (xuv == Complex(0.0)) continue;
      for (int k = 0; k < m_out; ++k)
        for (int l = 0; l < m_out; ++l) r(k, l) += xuv * c(u * m_out + k, v * m_out + l);
    }
  return r;
}

}  // namespace

Channel::Channel(Algebra in, Algebra out) : input(std::move(in)), output(std::move(out)) {
  choi.reserve(static_cast<std::size_t>(input.num_blocks()) * output.num_blocks());
  for (int i = 0; i < input.num_blocks(); ++i)
    for (int j = 0; j < output.num_blocks(); ++j)
      choi.push_back(HermitianMatrix::zero(input.block_dim(i) * output.block_dim(j)));
}

void Channel::set_choi_block(int i, int j, HermitianMatrix m) {
  if (m.dim() != input.block_dim(i) * output.block_dim(j))
    throw DimensionError("Choi block dimension mismatch");
  choi[static_cast<std::size_t>(i) * output.num_blocks() + static_cast<std::size_t>(j)] =
      std::move(m);
}

ChannelReport is_channel(const Channel& c, double tol) {
  ChannelReport rep;
  for (const HermitianMatrix& block : c.choi) {
    if (block.dim() == 0) continue;
    rep.psd_violation = std::max(rep.psd_violation, -min_eigenvalue(block));
  }
  for (int i = 0; i < c.input.num_blocks(); ++i) {
    const int n = c.input.block_dim(i);
    ComplexMatrix sum(n, n);
    for (int j = 0; j < c.output.num_blocks(); ++j) {
      const int m = c.output.block_dim(j);
      sum += partial_trace(c.choi_block(i, j).matrix(), {n, m}, {0});
    }
    rep.unitality_residual =
        std::max(rep.unitality_residual, (sum - ComplexMatrix::identity(n)).max_abs());
  }
  rep.ok = rep.psd_violation <= tol && rep.unitality_residual <= tol;
  return rep;
}

StateFunctional apply(const Channel& c, const StateFunctional& a) {
  if (a.algebra != c.input) throw AlgebraMismatchError("apply: functional on wrong algebra");
  StateFunctional out = StateFunctional::zero(c.output);
  for (int j = 0; j < c.output.num_blocks(); ++j) {
    const int m = c.output.block_dim(j);
    ComplexMatrix acc(m, m);
    for (int i = 0; i < c.input.num_blocks(); ++i)
      acc += apply_component(c.choi_block(i, j).matrix(), c.input.block_dim(i), m,
                             a.block[static_cast<std::size_t>(i)]);
    out.block[static_cast<std::size_t>(j)] = std::move(acc);
  }
  return out;
}

AlgebraElement apply_adjoint(const Channel& c, const AlgebraElement& b) {
  if (b.algebra != c.output) throw AlgebraMismatchError("apply_adjoint: element on wrong algebra");
  AlgebraElement out = AlgebraElement::zero(c.input);
  for (int i = 0; i < c.input.num_blocks(); ++i) {
    const int n = c.input.block_dim(i);
    ComplexMatrix acc(n, n);
    for (int j = 0; j < c.output.num_blocks(); ++j) {
      const int m = c.output.block_dim(j);
      const ComplexMatrix& cm = c.choi_block(i, j).matrix();
      const ComplexMatrix& bj = b.block[static_cast<std::size_t>(j)];
      // ⟨E_uv, Φ*(B)⟩ = ⟨Φ(E_uv), B⟩ entry by entry
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
          Complex s = 0.0;
          for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l) s += cm(u * m + k, v * m + l) * bj(l, k);
          acc(v, u) += s;
        }
    }
    out.block[static_cast<std::size_t>(i)] = std::move(acc);
  }
  return out;
}

Complex choi_pairing(const Channel& c, const StateFunctional& a, const AlgebraElement& b) {
  if (a.algebra != c.input || b.algebra != c.output)
    throw AlgebraMismatchError("choi_pairing: operand on wrong algebra");
  Complex t = 0.0;
  for (int i = 0; i < c.input.num_blocks(); ++i)
    for (int j = 0; j < c.output.num_blocks(); ++j) {
      const ComplexMatrix outer = kron(a.block[static_cast<std::size_t>(i)].transpose(),
                                       b.block[static_cast<std::size_t>(j)]);
      t += trace_product(c.choi_block(i, j).matrix(), outer);
    }
  return t;
}

Channel compose(const Channel& after, const Channel& before) {
  if (before.output != after.input)
    throw AlgebraMismatchError("compose: intermediate algebras do not match");
  Channel out(before.input, after.output);
  for (int i = 0; i < before.input.num_blocks(); ++i) {
    const int n = before.input.block_dim(i);
    std::vector<ComplexMatrix> blocks;
    for (int k = 0; k < after.output.num_blocks(); ++k)
      blocks.push_back(ComplexMatrix::zero(n * after.output.block_dim(k),
                                           n * after.output.block_dim(k)));

    ComplexMatrix unit(n, n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        unit(u, v) = 1.0;
        // mid_j = (before)_{ji}(E_uv), then push through `after`
        for (int k = 0; k < after.output.num_blocks(); ++k) {
          const int mk = after.output.block_dim(k);
          ComplexMatrix y(mk, mk);
          for (int j = 0; j < before.output.num_blocks(); ++j) {
            const int mj = before.output.block_dim(j);
            const ComplexMatrix mid =
                apply_component(before.choi_block(i, j).matrix(), n, mj, unit);
            y += apply_component(after.choi_block(j, k).matrix(), mj, mk, mid);
          }
          ComplexMatrix& target = blocks[static_cast<std::size_t>(k)];
          for (int p = 0; p < mk; ++p)
            for (int q = 0; q < mk; ++q) target(u * mk + p, v * mk + q) = y(p, q);
        }
        unit(u, v) = 0.0;
      }
    for (int k = 0; k < after.output.num_blocks(); ++k)
      out.set_choi_block(i, k, HermitianMatrix(blocks[static_cast<std::size_t>(k)], 1e-8));
  }
  return out;
}

Channel tensor_channels(const Channel& c1, const Channel& c2) {
  Channel out(tensor_algebra(c1.input, c2.input), tensor_algebra(c1.output, c2.output));
  const int k2 = c2.input.num_blocks();
  const int l2 = c2.output.num_blocks();
  for (int i1 = 0; i1 < c1.input.num_blocks(); ++i1)
    for (int i2 = 0; i2 < c2.input.num_blocks(); ++i2)
      for (int j1 = 0; j1 < c1.output.num_blocks(); ++j1)
        for (int j2 = 0; j2 < c2.output.num_blocks(); ++j2) {
          const ComplexMatrix prod =
              kron(c1.choi_block(i1, j1).matrix(), c2.choi_block(i2, j2).matrix());
          // (in1, out1, in2, out2) → (in1, in2, out1, out2)
          const ComplexMatrix shuffled = permute_factors(
              prod,
              {c1.input.block_dim(i1), c1.output.block_dim(j1), c2.input.block_dim(i2),
               c2.output.block_dim(j2)},
              {0, 2, 1, 3});
          out.set_choi_block(i1 * k2 + i2, j1 * l2 + j2, HermitianMatrix(shuffled, 1e-10));
        }
  return out;
}

Channel margin(const Channel& c, int factor, const Algebra& out1, const Algebra& out2) {
  if (factor != 1 && factor != 2) throw DimensionError("margin factor must be 1 or 2");
  if (c.output != tensor_algebra(out1, out2))
    throw AlgebraMismatchError("margin: output is not the stated tensor algebra");
  const Algebra& kept = (factor == 1) ? out1 : out2;
  Channel out(c.input, kept);
  const int nb2 = out2.num_blocks();
  for (int i = 0; i < c.input.num_blocks(); ++i) {
    const int n = c.input.block_dim(i);
    for (int j1 = 0; j1 < out1.num_blocks(); ++j1)
      for (int j2 = 0; j2 < out2.num_blocks(); ++j2) {
        const ComplexMatrix& block = c.choi_block(i, j1 * nb2 + j2).matrix();
        const std::vector<int> dims = {n, out1.block_dim(j1), out2.block_dim(j2)};
        if (factor == 1) {
          const ComplexMatrix tr = partial_trace(block, dims, {0, 1});
          out.set_choi_block(
              i, j1,
              HermitianMatrix(out.choi_block(i, j1).matrix() + tr, 1e-8));
        } else {
          const ComplexMatrix tr = partial_trace(block, dims, {0, 2});
          out.set_choi_block(
              i, j2,
              HermitianMatrix(out.choi_block(i, j2).matrix() + tr, 1e-8));
        }
      }
  }
  return out;
}

Channel from_measurement(const Measurement& m) {
  m.validate(1e-8);
  Channel out(m.algebra, Algebra::classical(m.num_outcomes()));
  for (int i = 0; i < m.algebra.num_blocks(); ++i)
    for (int x = 0; x < m.num_outcomes(); ++x)
      out.set_choi_block(
          i, x,
          HermitianMatrix(m.effect(x).block[static_cast<std::size_t>(i)].transpose(), 1e-8));
  return out;
}

Channel measure_and_prepare(const Measurement& m, const std::vector<StateFunctional>& prep) {
  if (static_cast<int>(prep.size()) != m.num_outcomes())
    throw DimensionError("measure_and_prepare: one prepared state per outcome");
  for (const StateFunctional& p : prep)
    if (!p.is_state(1e-8)) throw NumericError("measure_and_prepare: preparation is not a state");
  const Algebra& out_alg = prep.front().algebra;
  Channel out(m.algebra, out_alg);
  for (int i = 0; i < m.algebra.num_blocks(); ++i)
    for (int j = 0; j < out_alg.num_blocks(); ++j) {
      ComplexMatrix acc(m.algebra.block_dim(i) * out_alg.block_dim(j),
                        m.algebra.block_dim(i) * out_alg.block_dim(j));
      for (int x = 0; x < m.num_outcomes(); ++x)
        acc += kron(m.effect(x).block[static_cast<std::size_t>(i)].transpose(),
                    prep[static_cast<std::size_t>(x)].block[static_cast<std::size_t>(j)]);
      out.set_choi_block(i, j, HermitianMatrix(acc, 1e-8));
    }
  return out;
}

Channel depolarizing(int d, double gamma) {
  if (d < 1) throw DimensionError("depolarizing needs d >= 1");
  const Algebra q = Algebra::quantum(d);
  Channel out(q, q);
  ComplexMatrix c(d * d, d * d);
  for (int u = 0; u < d; ++u)
    for (int v = 0; v < d; ++v) c(u * d + u, v * d + v) = gamma;
  for (int k = 0; k < d * d; ++k) c(k, k) += (1.0 - gamma) / d;
  out.set_choi_block(0, 0, HermitianMatrix(c, 1e-10));
  return out;
}

Channel identity_channel(const Algebra& a) {
  Channel out(a, a);
  for (int i = 0; i < a.num_blocks(); ++i) {
    const int n = a.block_dim(i);
    ComplexMatrix c(n * n, n * n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) c(u * n + u, v * n + v) = 1.0;
    out.set_choi_block(i, i, HermitianMatrix(c, 1e-10));
  }
  return out;
}

Channel trivial_channel(const Algebra& a) {
  Channel out(a, Algebra::trivial());
  for (int i = 0; i < a.num_blocks(); ++i)
    out.set_choi_block(i, 0, HermitianMatrix::identity(a.block_dim(i)));
  return out;
}

Channel broadcast_abelian(int num_points) {
  const Algebra in = Algebra::classical(num_points);
  const Algebra out_alg = tensor_algebra(in, in);
  Channel out(in, out_alg);
  ComplexMatrix one(1, 1);
  one(0, 0) = 1.0;
  for (int x = 0; x < num_points; ++x)
    out.set_choi_block(x, x * num_points + x, HermitianMatrix(one));
  return out;
}

double channel_distance(const Channel& c1, const Channel& c2) {
  if (c1.input != c2.input || c2.output != c1.output)
    throw AlgebraMismatchError("channel_distance across algebras");
  double dev = 0.0;
  for (std::size_t k = 0; k < c1.choi.size(); ++k)
    dev = std::max(dev, (c1.choi[k].matrix() - c2.choi[k].matrix()).max_abs());
  return dev;
}

Channel random_channel(const Algebra& in, const Algebra& out, Rng& rng) {
  Channel c(in, out);
  for (int i = 0; i < in.num_blocks(); ++i) {
    const int n = in.block_dim(i);
    // random positive blocks, then a congruence on the input factor
    // enforcing Σ_j Tr_out choi[i,j] = I exactly
    std::vector<ComplexMatrix> raw;
    ComplexMatrix sum(n, n);
    for (int j = 0; j < out.num_blocks(); ++j) {
      const int m = out.block_dim(j);
      ComplexMatrix g(n * m, n * m);
      for (int r = 0; r < n * m; ++r)
        for (int s = 0; s < n * m; ++s) g(r, s) = Complex(rng.gauss(), rng.gauss());
      ComplexMatrix p = g * g.adjoint();
      sum += partial_trace(p, {n, m}, {0});
      raw.push_back(std::move(p));
    }
    const HermitianMatrix scale = inverse_sqrt(HermitianMatrix(sum, 1e-8));
    for (int j = 0; j < out.num_blocks(); ++j) {
      const int m = out.block_dim(j);
      const ComplexMatrix sm = kron(scale.matrix(), ComplexMatrix::identity(m));
      c.set_choi_block(i, j, HermitianMatrix(sm * raw[static_cast<std::size_t>(j)] * sm, 1e-8));
    }
  }
  return c;
}

}  // namespace witnesskit
