// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/incident_source.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include "blochrough/cyclic_dft.hpp"
#include "blochrough/errors.hpp"
#include "blochrough/log.hpp"

namespace blochrough
{

namespace
{

// Below this argument the ascending series is summed in extended precision; above it the
// Hankel asymptotic expansion is accurate to better than 1e-13.
constexpr double series_limit = 16.0;

cplx hankel_series(double zd)
{
  using ld = long double;
  const ld z = zd;
  const ld q = z * z / 4;
  ld term = 1, j0 = 1, ysum = 0, harmonic = 0;
  for (int k = 1; k < 200; k++)
  {
    term *= -q / (ld(k) * k);
    harmonic += ld(1) / k;
    j0 += term;
    ysum += harmonic * term;
    if (k > q && std::abs(term) * harmonic < 1e-22L)
    {
      break;
    }
  }
  const ld euler_gamma = 0.577215664901532860606512090082402431L;
  const ld two_over_pi = 0.636619772367581343075535053490057448L;
  const ld y0 = two_over_pi * ((std::log(z / 2) + euler_gamma) * j0 - ysum);
  return {double(j0), double(y0)};
}

cplx hankel_asymptotic(double z)
{
  cplx term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 100; k++)
  {
    const double odd = 2.0 * k - 1.0;
    term *= cplx(0.0, 1.0) * (-odd * odd / (8.0 * k * z));
    const double mag = std::abs(term);
    if (mag > last)
    {
      break;
    }
    sum += term;
    last = mag;
    if (mag < 1e-17)
    {
      break;
    }
  }
  return std::sqrt(2.0 / (pi * z)) * std::polar(1.0, z - 0.25 * pi) * sum;
}

}  // namespace

cplx hankel_h0(double z)
{
  if (!(z > 0.0) || !std::isfinite(z))
  {
    throw DomainError("hankel_h0 requires a positive finite argument");
  }
  return z <= series_limit ? hankel_series(z) : hankel_asymptotic(z);
}

cplx greens_halfspace(Point2 x, Point2 y, double k)
{
  if (!(x.x2 >= 0.0) || !(y.x2 > 0.0))
  {
    throw DomainError("half-space Green's function needs x2 >= 0 and y2 > 0");
  }
  const double dx = x.x1 - y.x1;
  const double r1 = std::hypot(dx, x.x2 - y.x2);
  if (r1 == 0.0)
  {
    throw SingularityError("Green's function evaluated at its source point");
  }
  const double r2 = std::hypot(dx, x.x2 + y.x2);
  if (r1 == r2)
  {
    return 0.0;
  }
  return cplx(0.0, 0.25) * (hankel_h0(k * r1) - hankel_h0(k * r2));
}

DirichletTable bloch_dirichlet_data(const BlochGrid &grid, const PeriodicCellMesh &mesh,
                                    const SurfaceProfile &profile, const PointSource &source,
                                    int N_bc)
{
  const int N = grid.N;
  if (N_bc < N / 2)
  {
    throw ParameterError("window half-width N_bc must be at least N/2");
  }
  const std::vector<int> bottom = mesh.bottom_basis();
  const int nb = static_cast<int>(bottom.size());
  DirichletTable table;
  table.N = N;
  table.num_bottom = nb;
  table.values.assign(std::size_t(N) * nb, 0.0);

  CyclicDft dft(N, N >= 8);
  int noisy = 0;
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(+ : noisy) reduction(max : worst)
  for (int b = 0; b < nb; b++)
  {
    const double x1 = mesh.nodes[mesh.node_of_basis[bottom[b]]].x1;
    // Fold the cell sum into N residue classes: exp(i alpha_j period m) =
    // exp(i alpha_0 period m) exp(2 pi i j m / N).
    std::vector<cplx> bins(N, 0.0), sums(N);
    double tail = 0.0;
    for (int m = -N_bc; m <= N_bc; m++)
    {
      const double X = x1 + grid.period * m;
      const double x2 = in_window(m, N) ? profile.eval(X).height : mesh.bottom;
      const cplx d = greens_halfspace({X, x2}, source.y, source.k);
      bins[((m % N) + N) % N] += d * std::polar(1.0, grid.alphas[0] * grid.period * m);
      if (m == -N_bc || m == N_bc)
      {
        tail = std::max(tail, std::abs(d));
      }
    }
    dft.backward(bins.data(), sums.data());
    double largest = 0.0;
    for (int j = 0; j < N; j++)
    {
      largest = std::max(largest, std::abs(sums[j]));
      table.values[std::size_t(j) * nb + b] =
          std::polar(grid.c_lambda, grid.alphas[j] * x1) * sums[j];
    }
    if (tail > 1e-6 * largest)
    {
      noisy += 1;
      worst = std::max(worst, tail / largest);
    }
  }
  if (noisy > 0)
  {
    std::ostringstream msg;
    msg << "boundary data window N_bc = " << N_bc << " truncates a tail of relative size up to "
        << worst << " at " << noisy << " bottom nodes";
    log::warning(msg.str());
  }
  return table;
}

cplx exact_reference_on_gamma_H(double x1, const PointSource &source, double H)
{
  return greens_halfspace({x1, H}, source.y, source.k);
}

}  // namespace blochrough
