// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_BLOCH_TRANSFORM_HPP
#define BLOCHROUGH_BLOCH_TRANSFORM_HPP

#include <span>
#include <vector>
#include "blochrough/periodic_mesh.hpp"
#include "blochrough/types.hpp"

namespace blochrough
{

// Midpoints alpha_j (j = 0..N-1) of N equal intervals of W* = (-pi/period, pi/period].
struct BlochGrid
{
  int N = 0;
  double period = 0.0;
  std::vector<double> alphas;
  double c_lambda = 0.0;  // sqrt(period / (2 pi))

  double step() const { return 2.0 * pi / (N * period); }       // interval length
  double half_step() const { return pi / (N * period); }        // delta
};

// Throws ParameterError unless N is even and positive.
BlochGrid alpha_grid(int N, double period);

// Envelope s(t) = 2 sin(delta t) / t and its derivative, with series branches near t = 0.
struct Envelope
{
  double s;
  double ds;
};

Envelope kernel_envelope(const BlochGrid &grid, double t);

// Integral of exp(-i alpha t) over the j-th alpha interval: exp(-i alpha_j t) s(t).
cplx bloch_kernel(const BlochGrid &grid, int j, double t);

// g_N^{(j,m)}(x1) = bloch_kernel(j, x1 - period m).
cplx g_factor(const BlochGrid &grid, int j, int m, double x1);

// C sum_m u_m exp(i alpha period m) for cell samples u_m, m = first_cell, first_cell+1, ....
// Periodized fields carry exp(-i alpha x1), so this sign pairs with bloch_kernel.
cplx forward_bloch(const BlochGrid &grid, std::span<const cplx> samples, int first_cell,
                   double alpha);

// Coefficients w^{(j, l)} stored alpha-major: coeffs[j * num_basis + l].
struct BlochField
{
  BlochGrid grid;
  int num_basis = 0;
  std::vector<cplx> coeffs;

  BlochField() = default;
  BlochField(BlochGrid g, int nb) : grid(std::move(g)), num_basis(nb), coeffs(grid.N * nb) {}

  cplx &operator()(int j, int l) { return coeffs[std::size_t(j) * num_basis + l]; }
  cplx operator()(int j, int l) const { return coeffs[std::size_t(j) * num_basis + l]; }
};

// Physical field at x + (period m, 0): C sum_j bloch_kernel(j, x1 + period m) sum_l w^{(j,l)} phi_l(x).
cplx inverse_bloch_eval(const BlochField &field, int m, Point2 x, const BasisValues &basis);

enum class SumPath
{
  automatic,  // FFT for N >= 8, direct otherwise
  direct,
  fft
};

// inverse_bloch_eval for all cells of Z_N at once; entry r belongs to m = r - N/2 + 1.
std::vector<cplx> inverse_bloch_cells(const BlochField &field, Point2 x, const BasisValues &basis,
                                      SumPath path = SumPath::automatic);

// sum_l (1 + l^2)^r * norms_squared[l - first_index].
double weighted_norm_squared(std::span<const double> norms_squared, int first_index, double r);

}  // namespace blochrough

#endif  // BLOCHROUGH_BLOCH_TRANSFORM_HPP
