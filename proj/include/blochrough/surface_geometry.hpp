// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_SURFACE_GEOMETRY_HPP
#define BLOCHROUGH_SURFACE_GEOMETRY_HPP

#include <functional>
#include <string>
#include "blochrough/types.hpp"

namespace blochrough
{

struct ProfileSample
{
  double height;
  double slope;
};

// Height function zeta of a rough surface, its slope and global bounds.
class SurfaceProfile
{
public:
  using Function = std::function<double(double)>;

  // zeta(t) = height.
  static SurfaceProfile constant(double height);

  // zeta(t) = mean + amplitude * sin(frequency * t).
  static SurfaceProfile sine(double mean, double amplitude, double frequency);

  // User profile with analytic slope. Bounds are taken as given.
  static SurfaceProfile custom(Function height, Function slope, double inf_height,
                               double sup_height, double lipschitz_bound);

  // User profile whose slope is obtained by central differences with the given step.
  static SurfaceProfile custom_fd(Function height, double fd_step, double inf_height,
                                  double sup_height, double lipschitz_bound);

  // Throws DomainError for non-finite t.
  ProfileSample eval(double t) const;

  double inf_height() const { return inf_; }
  double sup_height() const { return sup_; }
  double lipschitz_bound() const { return lip_; }
  const std::string &kind() const { return kind_; }

private:
  SurfaceProfile() = default;

  std::string kind_;
  Function height_, slope_;
  double inf_ = 0.0, sup_ = 0.0, lip_ = 0.0;
};

ProfileSample eval_profile(const SurfaceProfile &profile, double t);

struct SymMat2
{
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;
};

struct ThetaCoefficients
{
  SymMat2 A;
  double c = 0.0;
};

// Flattening diffeomorphism Theta(x) = (x1, x2 + phi(x2) (zeta(x1) - h0)) of the strip
// h0 <= x2 <= H onto the physical domain above the surface, with the cubic blend
// phi(x2) = (H0 - x2)^3 / (H0 - h0)^3 below H0 and identity above.
class FlatteningMap
{
public:
  // Validates h0 < H0 < H, 0 < inf zeta, sup zeta < H0 and det(grad Theta) > 0. The
  // determinant is checked on a 1024 x 64 grid over [sample_x_min, sample_x_max] x [h0, H0]
  // and through its exact lower bound in terms of sup zeta. Throws ParameterError or
  // SingularMapError.
  FlatteningMap(SurfaceProfile profile, double h0, double H0, double H,
                double sample_x_min = -8.0 * pi, double sample_x_max = 8.0 * pi);

  const SurfaceProfile &profile() const { return profile_; }
  double h0() const { return h0_; }
  double H0() const { return H0_; }
  double H() const { return H_; }

  // phi(x2) and phi'(x2).
  double blend(double x2) const;
  double blend_slope(double x2) const;

private:
  SurfaceProfile profile_;
  double h0_, H0_, H_;
};

// Throws DomainError for x2 < h0.
Point2 theta_map(const FlatteningMap &map, Point2 x);

// A_Theta = det * (grad Theta)^{-1} (grad Theta)^{-T} and c_Theta = det. Throws
// DomainError for x2 < h0 and SingularMapError where det <= 0.
ThetaCoefficients theta_coefficients(const FlatteningMap &map, Point2 x);

// Coefficients from the blend values and the surface sample; shared by the pointwise
// evaluator and the tabulated coupling kernels.
ThetaCoefficients theta_coefficients_from(double blend, double blend_slope, double zeta_minus_h0,
                                          double slope);

// A_Theta - I and c_Theta - 1 from the same inputs, without cancellation.
ThetaCoefficients perturbation_from(double blend, double blend_slope, double zeta_minus_h0,
                                    double slope);

// Perturbations A = A_Theta - I and c = c_Theta - 1, supported in x2 < H0.
class CoefficientField
{
public:
  CoefficientField(FlatteningMap map, double period);

  ThetaCoefficients perturbation(Point2 x) const;

  const FlatteningMap &map() const { return map_; }
  double period() const { return period_; }
  double support_top() const { return map_.H0(); }

  // True when A and c vanish identically (zeta == h0).
  bool is_trivial() const { return trivial_; }

private:
  FlatteningMap map_;
  double period_;
  bool trivial_;
};

// m in Z_N = {-N/2+1, ..., N/2}.
inline bool in_window(int m, int N)
{
  return m > -N / 2 && m <= N / 2;
}

// Perturbations evaluated at the translate (x1 + period m, x2) for m in Z_N, zero otherwise.
ThetaCoefficients masked_cell_coefficients(const CoefficientField &field, Point2 x, int m, int N);

}  // namespace blochrough

#endif  // BLOCHROUGH_SURFACE_GEOMETRY_HPP
