// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/dtn_operator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include "blochrough/errors.hpp"
#include "blochrough/log.hpp"

namespace blochrough
{

namespace
{

// Linear-hat moments over the unit interval: e1 = int (1 - t) exp(-iut) dt, e2 = int t exp(-iut) dt.
void hat_moments(double u, cplx &e1, cplx &e2)
{
  const cplx iu(0.0, u);
  if (std::abs(u) < 1.0)
  {
    cplx p = 1.0, s0 = 0.0, s2 = 0.0;
    double fact = 1.0;
    for (int n = 0; n < 30; n++)
    {
      if (n > 0)
      {
        p *= -iu;
        fact *= n;
      }
      s0 += p / (fact * (n + 1));
      s2 += p / (fact * (n + 2));
    }
    e2 = s2;
    e1 = s0 - s2;
    return;
  }
  const cplx ex = std::exp(-iu);
  const cplx e0 = (1.0 - ex) / iu;
  e2 = (e0 - ex) / iu;
  e1 = e0 - e2;
}

void warn_if_wood(const DtNConfig &config, int q, double alpha, cplx b)
{
  if (std::abs(b) < 1e-8 * config.k)
  {
    std::ostringstream msg;
    msg << "Rayleigh wavenumber beta_" << q << " vanishes at alpha = " << alpha
        << " (Wood anomaly)";
    log::warning(msg.str());
  }
}

}  // namespace

int default_dtn_modes(int nx, double k, double lambda_star)
{
  const int needed = static_cast<int>(std::ceil(k / lambda_star)) + 2;
  return std::max(std::min(nx / 2, 60), needed);
}

DtNConfig make_dtn_config(double k, double period, int nx, int J)
{
  if (!(k >= 0.0) || !std::isfinite(k))
  {
    throw ParameterError("wavenumber must be nonnegative");
  }
  DtNConfig c;
  c.k = k;
  c.lambda_star = 2.0 * pi / period;
  c.J = J > 0 ? J : default_dtn_modes(nx, k, c.lambda_star);
  if (c.J < static_cast<int>(std::ceil(k / c.lambda_star)) + 2)
  {
    throw ParameterError("DtN mode cutoff J must include all propagating modes plus two");
  }
  return c;
}

cplx beta(const DtNConfig &config, int q, double alpha)
{
  const double xi = config.lambda_star * q - alpha;
  const double d = config.k * config.k - xi * xi;
  return d >= 0.0 ? cplx(std::sqrt(d), 0.0) : cplx(0.0, std::sqrt(-d));
}

DenseMatrix hat_fourier_table(const PeriodicCellMesh &mesh, int J)
{
  const int nx = mesh.nx;
  const double ls = 2.0 * pi / mesh.period;
  DenseMatrix F(2 * J + 1, nx);
  // Segment s joins columns s and s+1; column 0 is identified with column nx (top node nx-1).
  for (int s = 0; s < nx; s++)
  {
    const int left = s == 0 ? nx - 1 : s - 1;
    const int right = s;
    const double a = mesh.nodes[mesh.node_index(mesh.ny, s)].x1;
    const double len = mesh.nodes[mesh.node_index(mesh.ny, s + 1)].x1 - a;
    for (int q = -J; q <= J; q++)
    {
      const double kappa = ls * q;
      cplx e1, e2;
      hat_moments(kappa * len, e1, e2);
      const cplx scale = len / mesh.period * std::polar(1.0, -kappa * a);
      F(q + J, left) += scale * e1;
      F(q + J, right) += scale * e2;
    }
  }
  return F;
}

std::vector<cplx> boundary_fourier_coeffs(const PeriodicCellMesh &mesh,
                                          std::span<const cplx> top_values, int J)
{
  if (static_cast<int>(top_values.size()) != mesh.nx)
  {
    throw ParameterError("boundary values must cover every top basis node");
  }
  const DenseMatrix F = hat_fourier_table(mesh, J);
  std::vector<cplx> out(2 * J + 1, 0.0);
  for (int q = 0; q <= 2 * J; q++)
  {
    for (int c = 0; c < mesh.nx; c++)
    {
      out[q] += F(q, c) * top_values[c];
    }
  }
  return out;
}

namespace
{

// -period sum_q i symbol_q F(q, l) conj(F(q, m)), restricted by keep(q).
template <class Keep>
DenseMatrix symbol_matrix(const PeriodicCellMesh &mesh, const DenseMatrix &F,
                          const std::vector<cplx> &symbol, Keep keep)
{
  const int nx = mesh.nx;
  DenseMatrix Q(nx, nx);
  for (int q = 0; q < F.rows; q++)
  {
    if (!keep(q))
    {
      continue;
    }
    const cplx s = -mesh.period * cplx(0.0, 1.0) * symbol[q];
    const cplx *f = &F.data[std::size_t(q) * nx];
    for (int m = 0; m < nx; m++)
    {
      const cplx fm = s * std::conj(f[m]);
      cplx *row = &Q.data[std::size_t(m) * nx];
      for (int l = 0; l < nx; l++)
      {
        row[l] += fm * f[l];
      }
    }
  }
  return Q;
}

}  // namespace

DenseMatrix dtn_bilinear_matrix(const DtNConfig &config, const PeriodicCellMesh &mesh, double alpha)
{
  const int J = config.J;
  std::vector<cplx> symbol(2 * J + 1);
  for (int q = -J; q <= J; q++)
  {
    symbol[q + J] = beta(config, q, alpha);
    warn_if_wood(config, q, alpha, symbol[q + J]);
  }
  return symbol_matrix(mesh, hat_fourier_table(mesh, J), symbol, [](int) { return true; });
}

DtNParts dtn_bilinear_parts(const DtNConfig &config, const PeriodicCellMesh &mesh, double alpha)
{
  const int J = config.J;
  std::vector<cplx> symbol(2 * J + 1);
  std::vector<bool> propagating(2 * J + 1);
  for (int q = -J; q <= J; q++)
  {
    symbol[q + J] = beta(config, q, alpha);
    propagating[q + J] = symbol[q + J].imag() == 0.0;
  }
  const DenseMatrix F = hat_fourier_table(mesh, J);
  return {symbol_matrix(mesh, F, symbol, [&](int q) { return bool(propagating[q]); }),
          symbol_matrix(mesh, F, symbol, [&](int q) { return !propagating[q]; })};
}

DenseMatrix dtn_interval_matrix(const DtNConfig &config, const PeriodicCellMesh &mesh,
                                const DenseMatrix &hat_table, double alpha_lo, double alpha_hi)
{
  static const std::array<double, 5> x = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                          0.5384693101056831, 0.9061798459386640};
  static const std::array<double, 5> w = {0.2369268850561891, 0.4786286704993665,
                                          0.5688888888888889, 0.4786286704993665,
                                          0.2369268850561891};
  const int J = config.J;
  const double mid = 0.5 * (alpha_lo + alpha_hi), half = 0.5 * (alpha_hi - alpha_lo);
  std::vector<cplx> symbol(2 * J + 1, 0.0);
  for (int q = -J; q <= J; q++)
  {
    for (int g = 0; g < 5; g++)
    {
      const double a = mid + half * x[g];
      const cplx b = beta(config, q, a);
      warn_if_wood(config, q, a, b);
      symbol[q + J] += half * w[g] * b;
    }
  }
  return symbol_matrix(mesh, hat_table, symbol, [](int) { return true; });
}

}  // namespace blochrough
