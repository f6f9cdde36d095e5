// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_PERIODIC_MESH_HPP
#define BLOCHROUGH_PERIODIC_MESH_HPP

#include <array>
#include <iosfwd>
#include <vector>
#include "blochrough/types.hpp"

namespace blochrough
{

enum class NodeClass
{
  interior,
  top,
  bottom
};

// Structured triangulation of the periodic cell [0, period] x [bottom, top]. Grid points are
// numbered row by row, point (row r, column c) at index r * (nx + 1) + c. Points on the left
// edge are not basis nodes; they share the basis index of their right-edge partner. Basis
// indices 0..M-1 are non-bottom nodes, M..M'-1 lie on the bottom line.
struct PeriodicCellMesh
{
  double period = 0.0;
  double bottom = 0.0;
  double top = 0.0;
  double h_target = 0.0;
  int nx = 0;
  int ny = 0;

  std::vector<Point2> nodes;
  std::vector<NodeClass> node_class;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise grid point indices

  int M = 0;
  int M_prime = 0;
  std::vector<int> basis_of_node;  // grid point -> basis index
  std::vector<int> node_of_basis;  // basis index -> grid point (never a left-edge point)

  double dx() const { return period / nx; }
  double dy() const { return (top - bottom) / ny; }
  int node_index(int row, int col) const { return row * (nx + 1) + col; }

  // Basis indices of the three vertices of triangle e.
  std::array<int, 3> element_basis(int e) const;

  // Top and bottom basis nodes ordered by increasing x1 (columns 1..nx).
  std::vector<int> top_basis() const;
  std::vector<int> bottom_basis() const;

  double triangle_area(int e) const;
};

// Mesh with nx = ceil(period / h) columns and ny = ceil((top - bottom) / h) rows. Requires
// 0 < h < top - bottom. Throws ParameterError.
PeriodicCellMesh build_periodic_mesh(double period, double bottom, double top, double h);

// Same structured mesh for explicit column and row counts (nx >= 2, ny >= 1).
PeriodicCellMesh build_periodic_mesh_grid(double period, double bottom, double top, int nx,
                                          int ny);

// Ordering of the retained (non-left-edge) grid points. Retained points are enumerated row by
// row; permutation[i] is the basis index of the i-th retained point, inverse undoes it.
struct NodeOrdering
{
  int M = 0;
  int M_prime = 0;
  std::vector<int> permutation;
  std::vector<int> inverse;
};

NodeOrdering node_ordering(const PeriodicCellMesh &mesh);

// Barycentric triangle quadrature; weights sum to one and are scaled by the area on use.
struct TriangleRule
{
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

// 3-point rule, exact for degree 2.
const TriangleRule &triangle_rule_degree2();

// 7-point rule, exact for degree 5.
const TriangleRule &triangle_rule_degree5();

// Nonzero basis functions at a point of the cell.
struct BasisValues
{
  int count = 0;
  std::array<int, 3> index{};
  std::array<double, 3> value{};
};

// Locates x (x1 taken modulo the period, x2 clamped to the band) in the structured grid.
BasisValues basis_at(const PeriodicCellMesh &mesh, Point2 x);

// Plain-text dump: "x y class" per node, then "i j k" per triangle.
void write_mesh(const PeriodicCellMesh &mesh, std::ostream &os);

}  // namespace blochrough

#endif  // BLOCHROUGH_PERIODIC_MESH_HPP
