// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/bloch_transform.hpp"

#include <cmath>
#include "blochrough/cyclic_dft.hpp"
#include "blochrough/errors.hpp"

namespace blochrough
{

BlochGrid alpha_grid(int N, double period)
{
  if (N < 2 || N % 2 != 0)
  {
    throw ParameterError("alpha grid size N must be even and positive");
  }
  if (!(period > 0.0) || !std::isfinite(period))
  {
    throw ParameterError("period must be positive");
  }
  BlochGrid g;
  g.N = N;
  g.period = period;
  g.c_lambda = std::sqrt(period / (2.0 * pi));
  g.alphas.resize(N);
  for (int j = 0; j < N; j++)
  {
    // Symmetric evaluation so that alpha_j = -alpha_{N-1-j} holds exactly.
    g.alphas[j] = (2 * j + 1 - N) * pi / (N * period);
  }
  return g;
}

Envelope kernel_envelope(const BlochGrid &grid, double t)
{
  const double d = grid.half_step();
  const double u = d * t;
  Envelope e;
  if (std::abs(t) < 1e-6 * grid.N * grid.period)
  {
    const double u2 = u * u;
    e.s = 2.0 * d * (1.0 - u2 / 6.0 + u2 * u2 / 120.0);
  }
  else
  {
    e.s = 2.0 * std::sin(u) / t;
  }
  if (std::abs(u) < 0.05)
  {
    const double u2 = u * u;
    e.ds = 2.0 * d * d * u * (-1.0 / 3.0 + u2 * (1.0 / 30.0 + u2 * (-1.0 / 840.0 + u2 / 45360.0)));
  }
  else
  {
    e.ds = 2.0 * d * d * (u * std::cos(u) - std::sin(u)) / (u * u);
  }
  return e;
}

cplx bloch_kernel(const BlochGrid &grid, int j, double t)
{
  return std::polar(kernel_envelope(grid, t).s, -grid.alphas[j] * t);
}

cplx g_factor(const BlochGrid &grid, int j, int m, double x1)
{
  return bloch_kernel(grid, j, x1 - grid.period * m);
}

cplx forward_bloch(const BlochGrid &grid, std::span<const cplx> samples, int first_cell,
                   double alpha)
{
  cplx acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); i++)
  {
    const double m = first_cell + static_cast<double>(i);
    acc += samples[i] * std::polar(1.0, alpha * grid.period * m);
  }
  return grid.c_lambda * acc;
}

namespace
{

cplx nodal_sum(const BlochField &field, int j, const BasisValues &basis)
{
  cplx v = 0.0;
  for (int k = 0; k < basis.count; k++)
  {
    v += field(j, basis.index[k]) * basis.value[k];
  }
  return v;
}

}  // namespace

cplx inverse_bloch_eval(const BlochField &field, int m, Point2 x, const BasisValues &basis)
{
  const BlochGrid &g = field.grid;
  const double t = x.x1 + g.period * m;
  cplx acc = 0.0;
  for (int j = 0; j < g.N; j++)
  {
    acc += bloch_kernel(g, j, t) * nodal_sum(field, j, basis);
  }
  return g.c_lambda * acc;
}

std::vector<cplx> inverse_bloch_cells(const BlochField &field, Point2 x, const BasisValues &basis,
                                      SumPath path)
{
  const BlochGrid &g = field.grid;
  const int N = g.N;
  const bool fft = path == SumPath::fft || (path == SumPath::automatic && N >= 8);
  std::vector<cplx> out(N);
  if (!fft)
  {
    for (int r = 0; r < N; r++)
    {
      out[r] = inverse_bloch_eval(field, r - N / 2 + 1, x, basis);
    }
    return out;
  }
  // exp(-i alpha_j (x1 + period m)) = exp(-i alpha_0 X) exp(-i j dalpha x1) exp(-2 pi i j m / N).
  std::vector<cplx> in(N), spec(N);
  const double da = g.step();
  for (int j = 0; j < N; j++)
  {
    in[j] = std::polar(1.0, -j * da * x.x1) * nodal_sum(field, j, basis);
  }
  CyclicDft dft(N, true);
  dft.forward(in.data(), spec.data());
  for (int r = 0; r < N; r++)
  {
    const int m = r - N / 2 + 1;
    const double X = x.x1 + g.period * m;
    const Envelope e = kernel_envelope(g, X);
    out[r] = g.c_lambda * e.s * std::polar(1.0, -g.alphas[0] * X) * spec[((m % N) + N) % N];
  }
  return out;
}

double weighted_norm_squared(std::span<const double> norms_squared, int first_index, double r)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < norms_squared.size(); i++)
  {
    const double l = first_index + static_cast<double>(i);
    acc += std::pow(1.0 + l * l, r) * norms_squared[i];
  }
  return acc;
}

}  // namespace blochrough
