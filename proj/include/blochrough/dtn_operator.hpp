// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_DTN_OPERATOR_HPP
#define BLOCHROUGH_DTN_OPERATOR_HPP

#include <span>
#include <vector>
#include "blochrough/periodic_mesh.hpp"
#include "blochrough/types.hpp"

namespace blochrough
{

struct DtNConfig
{
  double k = 0.0;
  double lambda_star = 1.0;  // 2 pi / period
  int J = 0;                 // modes |q| <= J
};

// max(min(nx/2, 60), ceil(k/lambda_star) + 2).
int default_dtn_modes(int nx, double k, double lambda_star);

// J <= 0 selects the default. Throws ParameterError when J misses propagating modes.
DtNConfig make_dtn_config(double k, double period, int nx, int J = 0);

// beta_q(alpha) = sqrt(k^2 - xi^2) for |xi| <= k, i sqrt(xi^2 - k^2) otherwise, xi = lambda_star q - alpha.
cplx beta(const DtNConfig &config, int q, double alpha);

// Row-major dense complex matrix.
struct DenseMatrix
{
  int rows = 0;
  int cols = 0;
  std::vector<cplx> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c) {}
  cplx &operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }
  cplx operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }
};

// (1/period) int_0^period phi_h(x1) exp(-i lambda_star q x1) dx1 for |q| <= J (entry q + J), with
// phi_h the periodic piecewise-linear interpolant of the values on the top basis nodes
// (ordered as PeriodicCellMesh::top_basis). Exact per element.
std::vector<cplx> boundary_fourier_coeffs(const PeriodicCellMesh &mesh,
                                          std::span<const cplx> top_values, int J);

// Fourier coefficients of every top hat function: entry (q + J, c) for top node c.
DenseMatrix hat_fourier_table(const PeriodicCellMesh &mesh, int J);

// Q(alpha)[m, l] = -period sum_{|q| <= J} i beta_q(alpha) phihat_l(q) conj(phihat_m(q)) over top nodes.
DenseMatrix dtn_bilinear_matrix(const DtNConfig &config, const PeriodicCellMesh &mesh, double alpha);

// Q(alpha) split into propagating (real beta) and evanescent (imaginary beta) mode sums.
struct DtNParts
{
  DenseMatrix propagating;
  DenseMatrix evanescent;
};

DtNParts dtn_bilinear_parts(const DtNConfig &config, const PeriodicCellMesh &mesh, double alpha);

// Integral of Q(alpha) over [alpha_lo, alpha_hi] by 5-point Gauss-Legendre in alpha.
DenseMatrix dtn_interval_matrix(const DtNConfig &config, const PeriodicCellMesh &mesh,
                                const DenseMatrix &hat_table, double alpha_lo, double alpha_hi);

}  // namespace blochrough

#endif  // BLOCHROUGH_DTN_OPERATOR_HPP
