// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/sparse.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace blochrough
{

int CsrMatrix::find(int i, int j) const
{
  const auto first = col_idx.begin() + row_ptr[i], last = col_idx.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? static_cast<int>(it - col_idx.begin()) : -1;
}

cplx CsrMatrix::coeff(int i, int j) const
{
  const int p = find(i, j);
  return p < 0 ? cplx(0.0) : values[p];
}

void CsrMatrix::multiply(const cplx *x, cplx *y) const
{
  for (int i = 0; i < rows; i++)
  {
    cplx acc = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      acc += values[p] * x[col_idx[p]];
    }
    y[i] = acc;
  }
}

void CsrMatrix::multiply_add(const cplx *x, cplx *y) const
{
  for (int i = 0; i < rows; i++)
  {
    cplx acc = 0.0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    {
      acc += values[p] * x[col_idx[p]];
    }
    y[i] += acc;
  }
}

CsrMatrix csr_from_rows(int cols, const std::vector<std::vector<int>> &row_cols)
{
  CsrMatrix A;
  A.rows = static_cast<int>(row_cols.size());
  A.cols = cols;
  A.row_ptr.assign(A.rows + 1, 0);
  for (int i = 0; i < A.rows; i++)
  {
    A.row_ptr[i + 1] = A.row_ptr[i] + static_cast<int>(row_cols[i].size());
  }
  A.col_idx.reserve(A.row_ptr.back());
  for (const auto &r : row_cols)
  {
    A.col_idx.insert(A.col_idx.end(), r.begin(), r.end());
  }
  A.values.assign(A.col_idx.size(), 0.0);
  return A;
}

void write_coordinate(const CsrMatrix &A, std::ostream &os)
{
  os << std::setprecision(17);
  for (int i = 0; i < A.rows; i++)
  {
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; p++)
    {
      os << i << ' ' << A.col_idx[p] << ' ' << A.values[p].real() << ' ' << A.values[p].imag()
         << '\n';
    }
  }
}

}  // namespace blochrough
