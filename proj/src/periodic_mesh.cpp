// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/periodic_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include "blochrough/errors.hpp"

namespace blochrough
{

std::array<int, 3> PeriodicCellMesh::element_basis(int e) const
{
  const auto &t = triangles[e];
  return {basis_of_node[t[0]], basis_of_node[t[1]], basis_of_node[t[2]]};
}

std::vector<int> PeriodicCellMesh::top_basis() const
{
  std::vector<int> out(nx);
  for (int c = 1; c <= nx; c++)
  {
    out[c - 1] = basis_of_node[node_index(ny, c)];
  }
  return out;
}

std::vector<int> PeriodicCellMesh::bottom_basis() const
{
  std::vector<int> out(nx);
  for (int c = 1; c <= nx; c++)
  {
    out[c - 1] = basis_of_node[node_index(0, c)];
  }
  return out;
}

double PeriodicCellMesh::triangle_area(int e) const
{
  const auto &t = triangles[e];
  const Point2 &a = nodes[t[0]], &b = nodes[t[1]], &c = nodes[t[2]];
  return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

PeriodicCellMesh build_periodic_mesh(double period, double bottom, double top, double h)
{
  if (!(period > 0.0) || !std::isfinite(period) || !(top > bottom))
  {
    throw ParameterError("degenerate periodic cell");
  }
  // At least two element rows.
  if (!(h > 0.0) || !(h < top - bottom))
  {
    throw ParameterError("mesh size must satisfy 0 < h < top - bottom");
  }
  // Guard against ceil() rounding up on exact ratios.
  auto count = [h](double len) {
    const double r = len / h;
    const double n = std::round(r);
    return static_cast<int>(std::abs(r - n) < 1e-12 * r ? n : std::ceil(r));
  };
  PeriodicCellMesh mesh = build_periodic_mesh_grid(period, bottom, top, std::max(2, count(period)),
                                                   count(top - bottom));
  mesh.h_target = h;
  return mesh;
}

PeriodicCellMesh build_periodic_mesh_grid(double period, double bottom, double top, int nx, int ny)
{
  if (!(period > 0.0) || !(top > bottom) || nx < 2 || ny < 1)
  {
    throw ParameterError("periodic grid needs period > 0, top > bottom, nx >= 2, ny >= 1");
  }
  PeriodicCellMesh mesh;
  mesh.period = period;
  mesh.bottom = bottom;
  mesh.top = top;
  mesh.nx = nx;
  mesh.ny = ny;
  mesh.h_target = std::max(period / nx, (top - bottom) / ny);

  const int npts = (nx + 1) * (ny + 1);
  mesh.nodes.resize(npts);
  mesh.node_class.resize(npts);
  for (int r = 0; r <= ny; r++)
  {
    // Exact end values on the top and bottom lines.
    const double y = r == ny ? top : bottom + (top - bottom) * r / ny;
    for (int c = 0; c <= nx; c++)
    {
      const double x = c == nx ? period : period * c / nx;
      const int i = mesh.node_index(r, c);
      mesh.nodes[i] = {x, y};
      mesh.node_class[i] = r == 0 ? NodeClass::bottom : (r == ny ? NodeClass::top : NodeClass::interior);
    }
  }
  for (int r = 0; r < ny; r++)
  {
    for (int c = 0; c < nx; c++)
    {
      const int a = mesh.node_index(r, c), b = mesh.node_index(r, c + 1);
      const int d = mesh.node_index(r + 1, c + 1), e = mesh.node_index(r + 1, c);
      mesh.triangles.push_back({a, b, d});
      mesh.triangles.push_back({a, d, e});
    }
  }

  const NodeOrdering ord = node_ordering(mesh);
  mesh.M = ord.M;
  mesh.M_prime = ord.M_prime;
  mesh.basis_of_node.assign(npts, -1);
  mesh.node_of_basis.assign(ord.M_prime, -1);
  for (int r = 0; r <= ny; r++)
  {
    for (int c = 1; c <= nx; c++)
    {
      const int b = ord.permutation[r * nx + (c - 1)];
      mesh.basis_of_node[mesh.node_index(r, c)] = b;
      mesh.node_of_basis[b] = mesh.node_index(r, c);
    }
    mesh.basis_of_node[mesh.node_index(r, 0)] = mesh.basis_of_node[mesh.node_index(r, nx)];
  }
  return mesh;
}

NodeOrdering node_ordering(const PeriodicCellMesh &mesh)
{
  const int nx = mesh.nx, ny = mesh.ny;
  NodeOrdering ord;
  ord.M_prime = (ny + 1) * nx;
  ord.permutation.resize(ord.M_prime);
  int next = 0;
  for (int pass = 0; pass < 2; pass++)
  {
    // Non-bottom retained points first, bottom points last.
    for (int r = 0; r <= ny; r++)
    {
      for (int c = 1; c <= nx; c++)
      {
        const bool is_bottom = mesh.node_class[mesh.node_index(r, c)] == NodeClass::bottom;
        if (is_bottom == (pass == 1))
        {
          ord.permutation[r * nx + (c - 1)] = next++;
        }
      }
    }
    if (pass == 0)
    {
      ord.M = next;
    }
  }
  ord.inverse.resize(ord.M_prime);
  for (int i = 0; i < ord.M_prime; i++)
  {
    ord.inverse[ord.permutation[i]] = i;
  }
  return ord;
}

const TriangleRule &triangle_rule_degree2()
{
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
  }();
  return rule;
}

const TriangleRule &triangle_rule_degree5()
{
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double s15 = std::sqrt(15.0);
    const double a = (6.0 - s15) / 21.0, wa = (155.0 - s15) / 1200.0;
    const double b = (6.0 + s15) / 21.0, wb = (155.0 + s15) / 1200.0;
    const double t = 1.0 / 3.0;
    r.points = {{t, t, t},
                {1.0 - 2.0 * a, a, a}, {a, 1.0 - 2.0 * a, a}, {a, a, 1.0 - 2.0 * a},
                {1.0 - 2.0 * b, b, b}, {b, 1.0 - 2.0 * b, b}, {b, b, 1.0 - 2.0 * b}};
    r.weights = {9.0 / 40.0, wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

BasisValues basis_at(const PeriodicCellMesh &mesh, Point2 x)
{
  double x1 = std::fmod(x.x1, mesh.period);
  if (x1 < 0.0)
  {
    x1 += mesh.period;
  }
  const double sx = x1 / mesh.dx();
  const double sy = std::clamp((x.x2 - mesh.bottom) / mesh.dy(), 0.0, static_cast<double>(mesh.ny));
  const int c = std::clamp(static_cast<int>(std::floor(sx)), 0, mesh.nx - 1);
  const int r = std::clamp(static_cast<int>(std::floor(sy)), 0, mesh.ny - 1);
  const double xi = sx - c, eta = sy - r;
  const int a = mesh.node_index(r, c), b = mesh.node_index(r, c + 1);
  const int d = mesh.node_index(r + 1, c + 1), e = mesh.node_index(r + 1, c);
  BasisValues out;
  out.count = 3;
  if (eta <= xi)
  {
    out.index = {mesh.basis_of_node[a], mesh.basis_of_node[b], mesh.basis_of_node[d]};
    out.value = {1.0 - xi, xi - eta, eta};
  }
  else
  {
    out.index = {mesh.basis_of_node[a], mesh.basis_of_node[d], mesh.basis_of_node[e]};
    out.value = {1.0 - eta, xi, eta - xi};
  }
  return out;
}

void write_mesh(const PeriodicCellMesh &mesh, std::ostream &os)
{
  static const char *names[] = {"interior", "top", "bottom"};
  for (std::size_t i = 0; i < mesh.nodes.size(); i++)
  {
    os << mesh.nodes[i].x1 << ' ' << mesh.nodes[i].x2 << ' '
       << names[static_cast<int>(mesh.node_class[i])] << '\n';
  }
  for (const auto &t : mesh.triangles)
  {
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

}  // namespace blochrough
