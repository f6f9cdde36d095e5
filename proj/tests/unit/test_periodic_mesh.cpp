// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include "blochrough/errors.hpp"
#include "blochrough/periodic_mesh.hpp"

using namespace blochrough;

namespace
{

double min_angle_deg(const PeriodicCellMesh &mesh, int e)
{
  const auto &t = mesh.triangles[e];
  double best = 180.0;
  for (int a = 0; a < 3; a++)
  {
    const Point2 p = mesh.nodes[t[a]], q = mesh.nodes[t[(a + 1) % 3]],
                 r = mesh.nodes[t[(a + 2) % 3]];
    const double ux = q.x1 - p.x1, uy = q.x2 - p.x2, vx = r.x1 - p.x1, vy = r.x2 - p.x2;
    const double ang = std::acos((ux * vx + uy * vy) / std::hypot(ux, uy) / std::hypot(vx, vy));
    best = std::min(best, ang * 180.0 / pi);
  }
  return best;
}

double factorial(int n)
{
  return n <= 1 ? 1.0 : n * factorial(n - 1);
}

}  // namespace

TEST(PeriodicMesh, CountsForQuarterPeriodWidth)
{
  const auto mesh = build_periodic_mesh(2.0 * pi, 1.0, 3.0, pi / 2.0);
  EXPECT_EQ(mesh.nx, 4);
  EXPECT_EQ(mesh.ny, 2);
  EXPECT_EQ(mesh.nodes.size(), 15u);
  EXPECT_EQ(mesh.triangles.size(), 16u);
  EXPECT_EQ(mesh.M_prime, 12);  // 4 retained columns x 3 rows
  EXPECT_EQ(mesh.M_prime - mesh.M, 4);

  // Euler's formula for the planar grid (outer face excluded): V - E + F = 1.
  std::set<std::pair<int, int>> edges;
  for (const auto &t : mesh.triangles)
  {
    for (int a = 0; a < 3; a++)
    {
      edges.insert(std::minmax(t[a], t[(a + 1) % 3]));
    }
  }
  EXPECT_EQ(int(mesh.nodes.size()) - int(edges.size()) + int(mesh.triangles.size()), 1);
}

TEST(PeriodicMesh, GeometricInvariants)
{
  for (double h : {0.16, 0.5, pi / 4.0})
  {
    const auto mesh = build_periodic_mesh(2.0 * pi, 1.0, 3.0, h);
    for (int e = 0; e < int(mesh.triangles.size()); e++)
    {
      EXPECT_GT(mesh.triangle_area(e), 0.0);
      EXPECT_GE(min_angle_deg(mesh, e), 20.0);
    }
    const double bound = std::sqrt(2.0) * std::max(mesh.dx(), mesh.dy());
    for (const auto &t : mesh.triangles)
    {
      for (int a = 0; a < 3; a++)
      {
        const Point2 p = mesh.nodes[t[a]], q = mesh.nodes[t[(a + 1) % 3]];
        EXPECT_LE(std::hypot(p.x1 - q.x1, p.x2 - q.x2), bound * (1 + 1e-14));
      }
    }
    for (int r = 0; r <= mesh.ny; r++)
    {
      const int left = mesh.node_index(r, 0), right = mesh.node_index(r, mesh.nx);
      EXPECT_EQ(mesh.nodes[left].x2, mesh.nodes[right].x2);
      EXPECT_EQ(mesh.basis_of_node[left], mesh.basis_of_node[right]);
    }
    for (int b = 0; b < mesh.M_prime; b++)
    {
      const int node = mesh.node_of_basis[b];
      EXPECT_NE(node % (mesh.nx + 1), 0) << "left-edge point used as basis node";
      EXPECT_EQ(mesh.basis_of_node[node], b);
      EXPECT_EQ(mesh.node_class[node] == NodeClass::bottom, b >= mesh.M);
    }
  }
}

TEST(PeriodicMesh, ConformingAfterIdentification)
{
  const auto mesh = build_periodic_mesh(2.0 * pi, 1.0, 3.0, 0.5);
  std::map<std::pair<int, int>, int> count;
  for (int e = 0; e < int(mesh.triangles.size()); e++)
  {
    const auto b = mesh.element_basis(e);
    for (int a = 0; a < 3; a++)
    {
      count[std::minmax(b[a], b[(a + 1) % 3])]++;
    }
  }
  for (const auto &[edge, n] : count)
  {
    const NodeClass c0 = mesh.node_class[mesh.node_of_basis[edge.first]];
    const NodeClass c1 = mesh.node_class[mesh.node_of_basis[edge.second]];
    const bool boundary = c0 == c1 && c0 != NodeClass::interior;
    EXPECT_EQ(n, boundary ? 1 : 2);
  }
}

TEST(PeriodicMesh, RefinementQuadruplesTriangles)
{
  const auto coarse = build_periodic_mesh(2.0 * pi, 1.0, 3.0, 0.5);
  const auto fine = build_periodic_mesh(2.0 * pi, 1.0, 3.0, 0.25);
  EXPECT_EQ(fine.triangles.size(), 4 * coarse.triangles.size());
}

TEST(PeriodicMesh, RejectsBadWidths)
{
  EXPECT_THROW(build_periodic_mesh(2.0 * pi, 1.0, 3.0, 0.0), ParameterError);
  EXPECT_THROW(build_periodic_mesh(2.0 * pi, 1.0, 3.0, -0.1), ParameterError);
  EXPECT_THROW(build_periodic_mesh(2.0 * pi, 1.0, 3.0, 2.0), ParameterError);
  EXPECT_EQ(build_periodic_mesh(2.0 * pi, 1.0, 3.0, 1.9).ny, 2);
  EXPECT_THROW(build_periodic_mesh(2.0 * pi, 3.0, 1.0, 0.1), ParameterError);
  EXPECT_THROW(build_periodic_mesh_grid(2.0 * pi, 1.0, 3.0, 1, 1), ParameterError);
}

TEST(NodeOrdering, BottomLastAndBijective)
{
  const auto mesh = build_periodic_mesh(2.0 * pi, 1.0, 3.0, pi / 2.0);
  const auto ord = node_ordering(mesh);
  EXPECT_EQ(ord.M, mesh.M);
  EXPECT_EQ(ord.M_prime, mesh.M_prime);
  EXPECT_EQ(ord.M_prime - ord.M, mesh.nx);
  std::vector<int> sorted = ord.permutation;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < ord.M_prime; i++)
  {
    EXPECT_EQ(sorted[i], i);
    EXPECT_EQ(ord.inverse[ord.permutation[i]], i);
    EXPECT_EQ(ord.permutation[ord.inverse[i]], i);
  }
}

TEST(TriangleRules, PolynomialExactness)
{
  // int over the reference triangle of x^a y^b = a! b! / (a + b + 2)!
  auto check = [](const TriangleRule &rule, int degree) {
    double wsum = 0.0;
    for (double w : rule.weights)
    {
      wsum += w;
    }
    EXPECT_NEAR(wsum, 1.0, 1e-14);
    for (int a = 0; a <= degree; a++)
    {
      for (int b = 0; a + b <= degree; b++)
      {
        double q = 0.0;
        for (std::size_t i = 0; i < rule.points.size(); i++)
        {
          q += 0.5 * rule.weights[i] * std::pow(rule.points[i][1], a) *
               std::pow(rule.points[i][2], b);
        }
        EXPECT_NEAR(q, factorial(a) * factorial(b) / factorial(a + b + 2), 1e-14)
            << "x^" << a << " y^" << b;
      }
    }
  };
  check(triangle_rule_degree2(), 2);
  check(triangle_rule_degree5(), 5);
}

TEST(BasisAt, PartitionOfUnityAndLinearHeight)
{
  const auto mesh = build_periodic_mesh(2.0 * pi, 1.0, 3.0, 0.3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u1(0.0, 2.0 * pi), u2(1.0, 3.0);
  for (int i = 0; i < 200; i++)
  {
    const Point2 x{u1(rng), u2(rng)};
    const auto bv = basis_at(mesh, x);
    double s = 0.0, y = 0.0;
    for (int a = 0; a < bv.count; a++)
    {
      EXPECT_GE(bv.value[a], -1e-14);
      s += bv.value[a];
      y += bv.value[a] * mesh.nodes[mesh.node_of_basis[bv.index[a]]].x2;
    }
    EXPECT_NEAR(s, 1.0, 1e-13);
    EXPECT_NEAR(y, x.x2, 1e-12);
  }
  // At a node the only nonzero value is that node's.
  const int node = mesh.node_index(2, 3);
  const auto at_node = basis_at(mesh, mesh.nodes[node]);
  double own = 0.0;
  for (int a = 0; a < at_node.count; a++)
  {
    if (at_node.index[a] == mesh.basis_of_node[node])
      own += at_node.value[a];
  }
  EXPECT_NEAR(own, 1.0, 1e-13);
}

TEST(WriteMesh, OneLinePerNodeAndTriangle)
{
  const auto mesh = build_periodic_mesh(2.0 * pi, 1.0, 3.0, pi / 2.0);
  std::ostringstream os;
  write_mesh(mesh, os);
  const std::string s = os.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'),
            long(mesh.nodes.size() + mesh.triangles.size()));
}
