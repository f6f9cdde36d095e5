// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_POSTPROCESS_HPP
#define BLOCHROUGH_POSTPROCESS_HPP

#include <iosfwd>
#include <span>
#include <vector>
#include "blochrough/bloch_transform.hpp"
#include "blochrough/periodic_mesh.hpp"
#include "blochrough/types.hpp"

namespace blochrough
{

// Field on the top line x2 = mesh.top in the reference cell.
std::vector<cplx> reconstruct_on_gamma_H(const BlochField &field, const PeriodicCellMesh &mesh,
                                         std::span<const double> sample_x1);

// intervals + 1 uniform abscissae on [a, b] and composite Simpson weights (intervals even).
std::vector<double> uniform_samples(int intervals, double a, double b);
std::vector<double> simpson_weights(int intervals, double a, double b);

// sqrt(sum w |numeric - exact|^2) / sqrt(sum w |exact|^2). Throws DegenerateReferenceError
// when the reference norm vanishes and ParameterError on size mismatch.
double relative_L2_error(std::span<const cplx> numeric, std::span<const cplx> exact,
                         std::span<const double> weights);

struct ConvergenceRow
{
  int N = 0;
  double h = 0.0;
  double err = 0.0;
  int iterations = 0;
  double seconds = 0.0;
};

// Rows keyed uniquely by (N, h).
class ConvergenceTable
{
public:
  // Throws ParameterError for a duplicate key or a negative error. NaN errors mark failed cells.
  void add(const ConvergenceRow &row);
  const std::vector<ConvergenceRow> &rows() const { return rows_; }

  // Header "N,h,err,iters,seconds". Without timing the seconds column is written as 0.
  void write_csv(std::ostream &os, bool timing = true) const;
  static ConvergenceTable read_csv(std::istream &is);

private:
  std::vector<ConvergenceRow> rows_;
};

struct RateFit
{
  double slope = 0.0;               // least-squares slope of log(err) against log(axis)
  std::vector<double> successive;   // slopes between neighbouring rows in axis order
};

// axis is 'N' or 'h'. Needs at least two finite positive errors with the other coordinate
// held fixed; throws ParameterError otherwise.
RateFit convergence_rates(const ConvergenceTable &table, char axis);

// Two-column "x err" rows sorted by the axis value.
void write_rate_file(const ConvergenceTable &table, char axis, std::ostream &os);

}  // namespace blochrough

#endif  // BLOCHROUGH_POSTPROCESS_HPP
