// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_SPARSE_HPP
#define BLOCHROUGH_SPARSE_HPP

#include <iosfwd>
#include <vector>
#include "blochrough/types.hpp"

namespace blochrough
{

// Complex CSR matrix with sorted column indices in every row.
struct CsrMatrix
{
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<cplx> values;

  int nnz() const { return static_cast<int>(col_idx.size()); }

  // Position of (i, j) in col_idx/values, or -1.
  int find(int i, int j) const;
  cplx coeff(int i, int j) const;

  // y = A x and y += A x.
  void multiply(const cplx *x, cplx *y) const;
  void multiply_add(const cplx *x, cplx *y) const;
};

// Zero-valued matrix with the given sorted-unique column sets per row.
CsrMatrix csr_from_rows(int cols, const std::vector<std::vector<int>> &row_cols);

// Coordinate dump, one "row col re im" line per stored entry.
void write_coordinate(const CsrMatrix &A, std::ostream &os);

}  // namespace blochrough

#endif  // BLOCHROUGH_SPARSE_HPP
