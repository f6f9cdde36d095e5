// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

// Lattice sum sum_m G((x1 + L m, x2), y) exp(i alpha L m) of the half-space Green's function,
// evaluated through its Rayleigh (plane wave) expansion. By Poisson summation the sum equals
//   (i / (2 L)) sum_q exp(i xi_q (x1 - y1)) (exp(i b_q |x2 - y2|) - exp(i b_q (x2 + y2))) / b_q
// with xi_q = 2 pi q / L - alpha and b_q = sqrt(k^2 - xi_q^2), Im b_q >= 0.

#ifndef BLOCHROUGH_ORACLE_RAYLEIGH_GREEN_HPP
#define BLOCHROUGH_ORACLE_RAYLEIGH_GREEN_HPP

#include <cmath>
#include <complex>

namespace oracle
{

inline std::complex<double> rayleigh_lattice_sum(double x1, double x2, double y1, double y2,
                                                 double k, double L, double alpha, int Q = 400)
{
  using c = std::complex<double>;
  const double two_pi = 2.0 * std::acos(-1.0);
  c sum = 0.0;
  for (int q = -Q; q <= Q; q++)
  {
    const double xi = two_pi * q / L - alpha;
    const double d = k * k - xi * xi;
    const c b = d >= 0.0 ? c(std::sqrt(d), 0.0) : c(0.0, std::sqrt(-d));
    const c ib(-b.imag(), b.real());  // i b
    sum += std::exp(c(0.0, xi * (x1 - y1))) *
           (std::exp(ib * std::abs(x2 - y2)) - std::exp(ib * (x2 + y2))) / b;
  }
  return c(0.0, 1.0) / (2.0 * L) * sum;
}

}  // namespace oracle

#endif
