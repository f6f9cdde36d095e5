// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_TYPES_HPP
#define BLOCHROUGH_TYPES_HPP

#include <complex>
#include <numbers>

namespace blochrough
{

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// A point in the (x1, x2) plane. x2 is the vertical coordinate.
struct Point2
{
  double x1 = 0.0;
  double x2 = 0.0;

  bool operator==(const Point2 &) const = default;
};

}  // namespace blochrough

#endif  // BLOCHROUGH_TYPES_HPP
