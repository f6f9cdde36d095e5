// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_SYSTEM_ASSEMBLY_HPP
#define BLOCHROUGH_SYSTEM_ASSEMBLY_HPP

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <vector>
#include "blochrough/bloch_transform.hpp"
#include "blochrough/dtn_operator.hpp"
#include "blochrough/incident_source.hpp"
#include "blochrough/periodic_mesh.hpp"
#include "blochrough/sparse.hpp"
#include "blochrough/surface_geometry.hpp"

namespace blochrough
{

struct AssemblyOptions
{
  bool include_dtn = true;
  // Evaluate the integrand at this alpha instead of integrating over the interval.
  std::optional<double> frozen_alpha;
};

// Diagonal blocks A_j. Volume terms are integrated exactly in alpha over the j-th interval,
// the DtN term by 5-point Gauss. Rows of bottom nodes are identity rows. All blocks share one
// sparsity pattern: the P1 stencil plus the dense top-top coupling of the DtN term.
class DiagonalBlockAssembler
{
public:
  DiagonalBlockAssembler(const PeriodicCellMesh &mesh, const DtNConfig &dtn,
                         AssemblyOptions options = {});

  CsrMatrix block(const BlochGrid &grid, int j) const;

  // Volume plus DtN form a'_alpha at a single alpha, bottom rows identity.
  CsrMatrix single_alpha_form(double alpha) const;

  // Periodic P1 stiffness, mass and the alpha-coefficient i(C - C^T), C[m,l] = int d1(phi_l) phi_m,
  // on the shared pattern with bottom rows left empty.
  const CsrMatrix &stiffness() const { return K_; }
  const CsrMatrix &mass() const { return Mass_; }
  const CsrMatrix &skew() const { return S_; }

private:
  CsrMatrix combine(double len, double a1, double a2, const DenseMatrix *dtn) const;

  const PeriodicCellMesh &mesh_;
  DtNConfig dtn_;
  AssemblyOptions options_;
  CsrMatrix K_, Mass_, S_;
  DenseMatrix hat_table_;
  std::vector<int> top_;          // top basis nodes in column order
  std::vector<int> top_pos_;      // position of (top_[a], top_[b]) in the pattern
};

CsrMatrix assemble_diagonal_block(int j, const PeriodicCellMesh &mesh, const DtNConfig &dtn,
                                  const BlochGrid &grid, AssemblyOptions options = {});

// Quadrature data shared by the explicit and matrix-free coupling.
struct CouplingGeometry
{
  struct Element
  {
    std::array<int, 3> basis;
    std::array<double, 3> g1, g2;  // constant gradients of the barycentric hats
    int first_qp;
    int num_qp;
  };
  std::vector<Element> elements;  // only elements with quadrature points below H0
  std::vector<int> x1_index;      // per qp, index into unique_x1
  std::vector<double> x2, weight, blend, blend_slope;
  std::vector<std::array<double, 3>> lambda;
  std::vector<double> unique_x1;
};

CouplingGeometry coupling_geometry(const PeriodicCellMesh &mesh, const FlatteningMap &map);

// Cell-dependent factors at (unique x1, cell): C exp(-i alpha_0 X), envelope, surface sample.
struct CouplingTables
{
  std::vector<int> cells;
  std::vector<cplx> phase;
  std::vector<double> s, ds, zeta_minus_h0, slope;
  std::vector<cplx> twist;  // per (unique x1, j): exp(-i j dalpha x1)

  std::size_t at(int u, int c) const { return std::size_t(u) * cells.size() + c; }
};

CouplingTables coupling_tables(const CouplingGeometry &geo, const BlochGrid &grid,
                               const CoefficientField &field, const std::vector<int> &cells);

// Z_N in ascending order.
std::vector<int> window_cells(int N);

// y += B x for coefficient vectors of length N * M', alpha-major.
class CouplingApply
{
public:
  virtual ~CouplingApply() = default;
  virtual void apply_add(const cplx *x, cplx *y) const = 0;
};

enum class CouplingPart
{
  all,
  stiffness,
  mass
};

// Explicit blocks B_{nj} (test alpha n, trial alpha j) on the P1 pattern. Rows of bottom test
// nodes are empty; bottom trial columns are kept because the Dirichlet lift couples.
class CouplingBlocks : public CouplingApply
{
public:
  int N = 0;
  int M = 0;
  int M_prime = 0;
  CsrMatrix pattern;
  std::vector<std::vector<cplx>> values;  // values[n * N + j]

  CsrMatrix block(int n, int j) const;
  void apply_add(const cplx *x, cplx *y) const override;
};

// Throws StorageGuardError when N^2 * nnz exceeds max_entries.
CouplingBlocks assemble_coupling_explicit(const PeriodicCellMesh &mesh, const BlochGrid &grid,
                                          const CoefficientField &field, double k,
                                          const std::vector<int> &cells,
                                          CouplingPart part = CouplingPart::all,
                                          double max_entries = 2e8);

// Matrix-free B: per quadrature point the alpha sums become length-N DFTs over cells.
class CouplingOperator : public CouplingApply
{
public:
  CouplingOperator(const PeriodicCellMesh &mesh, const BlochGrid &grid,
                   const CoefficientField &field, double k, const std::vector<int> &cells,
                   SumPath path = SumPath::automatic);
  ~CouplingOperator() override;

  void apply_add(const cplx *x, cplx *y) const override;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Right-hand side: zero at non-bottom nodes, c_{j,b} at bottom node M + b.
std::vector<cplx> assemble_rhs(const DirichletTable &table, const PeriodicCellMesh &mesh);

// (A + B) with A block diagonal.
struct BlockSystem
{
  int N = 0;
  int M = 0;
  int M_prime = 0;
  std::vector<CsrMatrix> diag_blocks;
  std::shared_ptr<const CouplingApply> coupling;  // null when B vanishes
  std::vector<cplx> rhs;

  std::size_t size() const { return std::size_t(N) * M_prime; }
  void apply(const cplx *x, cplx *y) const;
};

}  // namespace blochrough

#endif  // BLOCHROUGH_SYSTEM_ASSEMBLY_HPP
