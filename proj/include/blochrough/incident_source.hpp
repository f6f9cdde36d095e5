// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_INCIDENT_SOURCE_HPP
#define BLOCHROUGH_INCIDENT_SOURCE_HPP

#include <vector>
#include "blochrough/bloch_transform.hpp"
#include "blochrough/periodic_mesh.hpp"
#include "blochrough/surface_geometry.hpp"
#include "blochrough/types.hpp"

namespace blochrough
{

// Point source at y with wavenumber k.
struct PointSource
{
  Point2 y;
  double k = 0.0;
};

// Hankel function of the first kind and order zero, J0(z) + i Y0(z). Throws DomainError for
// z <= 0 or non-finite z.
cplx hankel_h0(double z);

// Half-space Green's function (i/4)[H0(k|x-y|) - H0(k|x-y'|)] with y' = (y1, -y2).
// Throws SingularityError for x = y and DomainError for x2 < 0 or y2 <= 0.
cplx greens_halfspace(Point2 x, Point2 y, double k);

// Boundary values c_{j,b} for the bottom basis nodes M + b, b = 0..nx-1, stored
// values[j * nx + b].
struct DirichletTable
{
  int N = 0;
  int num_bottom = 0;
  std::vector<cplx> values;

  cplx operator()(int j, int b) const { return values[std::size_t(j) * num_bottom + b]; }
};

// c_{j,b} = exp(i alpha_j x1) C sum_{|m| <= N_bc} d_m(x1) exp(i alpha_j period m), with
// d_m(x1) = G((x1 + period m, zeta(x1 + period m)), y) for m in Z_N and the flat trace at
// x2 = mesh.bottom otherwise. Warns when the window tail is not negligible.
DirichletTable bloch_dirichlet_data(const BlochGrid &grid, const PeriodicCellMesh &mesh,
                                    const SurfaceProfile &profile, const PointSource &source,
                                    int N_bc);

// Exact scattered field G((x1, H), y) on the top line.
cplx exact_reference_on_gamma_H(double x1, const PointSource &source, double H);

}  // namespace blochrough

#endif  // BLOCHROUGH_INCIDENT_SOURCE_HPP
