// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/surface_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include "blochrough/errors.hpp"

namespace blochrough
{

SurfaceProfile SurfaceProfile::constant(double height)
{
  if (!std::isfinite(height))
  {
    throw ParameterError("constant profile height must be finite");
  }
  SurfaceProfile p;
  p.kind_ = "constant";
  p.height_ = [height](double) { return height; };
  p.slope_ = [](double) { return 0.0; };
  p.inf_ = p.sup_ = height;
  p.lip_ = 0.0;
  return p;
}

SurfaceProfile SurfaceProfile::sine(double mean, double amplitude, double frequency)
{
  if (!std::isfinite(mean) || !std::isfinite(amplitude) || !std::isfinite(frequency))
  {
    throw ParameterError("sine profile parameters must be finite");
  }
  SurfaceProfile p;
  p.kind_ = "sine";
  p.height_ = [=](double t) { return mean + amplitude * std::sin(frequency * t); };
  p.slope_ = [=](double t) { return amplitude * frequency * std::cos(frequency * t); };
  p.inf_ = mean - std::abs(amplitude);
  p.sup_ = mean + std::abs(amplitude);
  p.lip_ = std::abs(amplitude * frequency);
  return p;
}

SurfaceProfile SurfaceProfile::custom(Function height, Function slope, double inf_height,
                                      double sup_height, double lipschitz_bound)
{
  if (!height || !slope)
  {
    throw ParameterError("custom profile requires height and slope functions");
  }
  if (!(inf_height <= sup_height) || !(lipschitz_bound >= 0.0))
  {
    throw ParameterError("custom profile bounds are inconsistent");
  }
  SurfaceProfile p;
  p.kind_ = "custom";
  p.height_ = std::move(height);
  p.slope_ = std::move(slope);
  p.inf_ = inf_height;
  p.sup_ = sup_height;
  p.lip_ = lipschitz_bound;
  return p;
}

SurfaceProfile SurfaceProfile::custom_fd(Function height, double fd_step, double inf_height,
                                         double sup_height, double lipschitz_bound)
{
  if (!(fd_step > 0.0))
  {
    throw ParameterError("finite-difference step must be positive");
  }
  auto f = height;
  auto slope = [f, fd_step](double t) { return (f(t + fd_step) - f(t - fd_step)) / (2.0 * fd_step); };
  return custom(std::move(height), slope, inf_height, sup_height, lipschitz_bound);
}

ProfileSample SurfaceProfile::eval(double t) const
{
  if (!std::isfinite(t))
  {
    throw DomainError("profile evaluated at non-finite abscissa");
  }
  return {height_(t), slope_(t)};
}

ProfileSample eval_profile(const SurfaceProfile &profile, double t)
{
  return profile.eval(t);
}

FlatteningMap::FlatteningMap(SurfaceProfile profile, double h0, double H0, double H,
                             double sample_x_min, double sample_x_max)
  : profile_(std::move(profile)), h0_(h0), H0_(H0), H_(H)
{
  if (!(h0 > 0.0 && h0 < H0 && H0 < H) || !std::isfinite(H))
  {
    throw ParameterError("flattening band requires 0 < h0 < H0 < H");
  }
  if (!(profile_.inf_height() > 0.0))
  {
    throw ParameterError("surface must stay above x2 = 0");
  }
  if (!(profile_.sup_height() < H0))
  {
    throw ParameterError("surface must stay below the blend height H0");
  }
  // det = 1 + phi'(x2)(zeta - h0) with -3/(H0-h0) <= phi' <= 0; the minimum over x2 is
  // attained at x2 = h0.
  const double det_bound = 1.0 - 3.0 * std::max(0.0, profile_.sup_height() - h0) / (H0 - h0);
  if (!(det_bound > 0.0))
  {
    std::ostringstream msg;
    msg << "flattening map is singular: sup zeta - h0 must be below (H0 - h0)/3, got "
        << profile_.sup_height() - h0;
    throw SingularMapError(msg.str());
  }
  constexpr int nsx = 1024, nsy = 64;
  for (int i = 0; i < nsx; i++)
  {
    const double x1 = sample_x_min + (sample_x_max - sample_x_min) * i / nsx;
    const ProfileSample z = profile_.eval(x1);
    if (!(z.height > 0.0 && z.height < H0))
    {
      std::ostringstream msg;
      msg << "surface height " << z.height << " at x1 = " << x1 << " leaves (0, H0)";
      throw ParameterError(msg.str());
    }
    for (int k = 0; k <= nsy; k++)
    {
      const double x2 = h0 + (H0 - h0) * k / nsy;
      const double det = 1.0 + blend_slope(x2) * (z.height - h0);
      if (!(det > 0.0))
      {
        std::ostringstream msg;
        msg << "flattening map is singular at (" << x1 << ", " << x2 << ")";
        throw SingularMapError(msg.str());
      }
    }
  }
}

double FlatteningMap::blend(double x2) const
{
  if (x2 >= H0_)
  {
    return 0.0;
  }
  const double r = (H0_ - x2) / (H0_ - h0_);
  return r * r * r;
}

double FlatteningMap::blend_slope(double x2) const
{
  if (x2 >= H0_)
  {
    return 0.0;
  }
  const double d = H0_ - h0_;
  const double r = (H0_ - x2) / d;
  return -3.0 * r * r / d;
}

Point2 theta_map(const FlatteningMap &map, Point2 x)
{
  if (!(x.x2 >= map.h0()))
  {
    throw DomainError("theta_map evaluated below the band");
  }
  if (x.x2 >= map.H0())
  {
    return x;
  }
  const ProfileSample z = map.profile().eval(x.x1);
  return {x.x1, x.x2 + map.blend(x.x2) * (z.height - map.h0())};
}

ThetaCoefficients theta_coefficients_from(double blend, double blend_slope, double zeta_minus_h0,
                                          double slope)
{
  const double det = 1.0 + blend_slope * zeta_minus_h0;
  const double j21 = blend * slope;
  return {{det, -j21, (1.0 + j21 * j21) / det}, det};
}

ThetaCoefficients perturbation_from(double blend, double blend_slope, double zeta_minus_h0,
                                    double slope)
{
  const double dd = blend_slope * zeta_minus_h0;  // det - 1
  const double j21 = blend * slope;
  return {{dd, -j21, (j21 * j21 - dd) / (1.0 + dd)}, dd};
}

ThetaCoefficients theta_coefficients(const FlatteningMap &map, Point2 x)
{
  if (!(x.x2 >= map.h0()))
  {
    throw DomainError("theta_coefficients evaluated below the band");
  }
  if (x.x2 >= map.H0())
  {
    return {{1.0, 0.0, 1.0}, 1.0};
  }
  const ProfileSample z = map.profile().eval(x.x1);
  const double det = 1.0 + map.blend_slope(x.x2) * (z.height - map.h0());
  if (!(det > 0.0))
  {
    std::ostringstream msg;
    msg << "det grad Theta = " << det << " at (" << x.x1 << ", " << x.x2 << ")";
    throw SingularMapError(msg.str());
  }
  return theta_coefficients_from(map.blend(x.x2), map.blend_slope(x.x2), z.height - map.h0(),
                                 z.slope);
}

CoefficientField::CoefficientField(FlatteningMap map, double period)
  : map_(std::move(map)), period_(period)
{
  if (!(period > 0.0) || !std::isfinite(period))
  {
    throw ParameterError("period must be positive");
  }
  const SurfaceProfile &p = map_.profile();
  trivial_ = p.kind() == "constant" && p.sup_height() == map_.h0();
}

ThetaCoefficients CoefficientField::perturbation(Point2 x) const
{
  if (trivial_ || x.x2 >= map_.H0())
  {
    return {};
  }
  // Validates the point and the determinant.
  theta_coefficients(map_, x);
  const ProfileSample z = map_.profile().eval(x.x1);
  return perturbation_from(map_.blend(x.x2), map_.blend_slope(x.x2), z.height - map_.h0(),
                           z.slope);
}

ThetaCoefficients masked_cell_coefficients(const CoefficientField &field, Point2 x, int m, int N)
{
  if (!in_window(m, N))
  {
    return {};
  }
  return field.perturbation({x.x1 + field.period() * m, x.x2});
}

}  // namespace blochrough
