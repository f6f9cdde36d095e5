// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include "blochrough/errors.hpp"

namespace blochrough
{

std::vector<cplx> reconstruct_on_gamma_H(const BlochField &field, const PeriodicCellMesh &mesh,
                                         std::span<const double> sample_x1)
{
  std::vector<cplx> out(sample_x1.size());
  for (std::size_t i = 0; i < sample_x1.size(); i++)
  {
    const Point2 x{sample_x1[i], mesh.top};
    out[i] = inverse_bloch_eval(field, 0, x, basis_at(mesh, x));
  }
  return out;
}

std::vector<double> uniform_samples(int intervals, double a, double b)
{
  std::vector<double> x(intervals + 1);
  for (int i = 0; i <= intervals; i++)
  {
    x[i] = i == intervals ? b : a + (b - a) * i / intervals;
  }
  return x;
}

std::vector<double> simpson_weights(int intervals, double a, double b)
{
  if (intervals < 2 || intervals % 2 != 0)
  {
    throw ParameterError("Simpson's rule needs an even number of intervals");
  }
  const double h = (b - a) / intervals;
  std::vector<double> w(intervals + 1);
  for (int i = 0; i <= intervals; i++)
  {
    w[i] = (i == 0 || i == intervals) ? h / 3.0 : (i % 2 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
  }
  return w;
}

double relative_L2_error(std::span<const cplx> numeric, std::span<const cplx> exact,
                         std::span<const double> weights)
{
  if (numeric.size() != exact.size() || exact.size() != weights.size())
  {
    throw ParameterError("error functional needs samples and weights of equal length");
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < exact.size(); i++)
  {
    num += weights[i] * std::norm(numeric[i] - exact[i]);
    den += weights[i] * std::norm(exact[i]);
  }
  if (!(den > 0.0))
  {
    throw DegenerateReferenceError("reference trace has zero norm");
  }
  return std::sqrt(num / den);
}

void ConvergenceTable::add(const ConvergenceRow &row)
{
  if (row.err < 0.0)
  {
    throw ParameterError("errors must be nonnegative");
  }
  for (const auto &r : rows_)
  {
    if (r.N == row.N && r.h == row.h)
    {
      throw ParameterError("duplicate (N, h) row in convergence table");
    }
  }
  rows_.push_back(row);
}

void ConvergenceTable::write_csv(std::ostream &os, bool timing) const
{
  os << "N,h,err,iters,seconds\n";
  for (const auto &r : rows_)
  {
    std::ostringstream line;
    line << std::setprecision(17) << r.N << ',' << r.h << ',' << r.err << ',' << r.iterations
         << ',' << std::setprecision(6) << (timing ? r.seconds : 0.0) << '\n';
    os << line.str();
  }
}

ConvergenceTable ConvergenceTable::read_csv(std::istream &is)
{
  ConvergenceTable t;
  std::string line;
  if (!std::getline(is, line) || line.rfind("N,h,err", 0) != 0)
  {
    throw ParseError(1, "expected header N,h,err,iters,seconds");
  }
  int lineno = 1;
  while (std::getline(is, line))
  {
    lineno++;
    if (line.empty())
    {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    ConvergenceRow r;
    std::string err;
    if (!(ss >> r.N >> r.h >> err >> r.iterations >> r.seconds))
    {
      throw ParseError(lineno, "malformed CSV row");
    }
    r.err = std::strtod(err.c_str(), nullptr);
    t.add(r);
  }
  return t;
}

namespace
{

std::vector<std::pair<double, double>> axis_points(const ConvergenceTable &table, char axis)
{
  if (axis != 'N' && axis != 'h')
  {
    throw ParameterError("rate axis must be 'N' or 'h'");
  }
  std::vector<std::pair<double, double>> pts;
  bool first = true;
  double other = 0.0;
  for (const auto &r : table.rows())
  {
    if (!(r.err > 0.0) || !std::isfinite(r.err))
    {
      continue;
    }
    const double o = axis == 'N' ? r.h : double(r.N);
    if (first)
    {
      other = o;
      first = false;
    }
    else if (o != other)
    {
      throw ParameterError("rate rows must vary only along the chosen axis");
    }
    pts.emplace_back(axis == 'N' ? double(r.N) : r.h, r.err);
  }
  std::sort(pts.begin(), pts.end());
  if (pts.size() < 2)
  {
    throw ParameterError("at least two usable rows are needed for a rate");
  }
  return pts;
}

}  // namespace

RateFit convergence_rates(const ConvergenceTable &table, char axis)
{
  const auto pts = axis_points(table, axis);
  const double n = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto &[x, e] : pts)
  {
    const double lx = std::log(x), ly = std::log(e);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  for (std::size_t i = 1; i < pts.size(); i++)
  {
    fit.successive.push_back(std::log(pts[i].second / pts[i - 1].second) /
                             std::log(pts[i].first / pts[i - 1].first));
  }
  return fit;
}

void write_rate_file(const ConvergenceTable &table, char axis, std::ostream &os)
{
  os << std::setprecision(17);
  for (const auto &[x, e] : axis_points(table, axis))
  {
    os << x << ' ' << e << '\n';
  }
}

}  // namespace blochrough
