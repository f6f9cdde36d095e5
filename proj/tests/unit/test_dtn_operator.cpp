// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>
#include "blochrough/dtn_operator.hpp"
#include "blochrough/errors.hpp"

using namespace blochrough;

namespace
{

constexpr double kPeriod = 2.0 * pi;

PeriodicCellMesh mesh_with(int nx)
{
  return build_periodic_mesh_grid(kPeriod, 1.0, 3.0, nx, 2);
}

Eigen::MatrixXcd to_eigen(const DenseMatrix &A)
{
  Eigen::MatrixXcd out(A.rows, A.cols);
  for (int i = 0; i < A.rows; i++)
  {
    for (int j = 0; j < A.cols; j++)
    {
      out(i, j) = A(i, j);
    }
  }
  return out;
}

// Samples of exp(i q x1) on the top basis nodes, which sit at x1 = (c + 1) dx.
Eigen::VectorXcd mode(const PeriodicCellMesh &mesh, int q)
{
  Eigen::VectorXcd v(mesh.nx);
  for (int c = 0; c < mesh.nx; c++)
  {
    v(c) = std::polar(1.0, q * (c + 1) * mesh.dx());
  }
  return v;
}

// Periodic P1 mass matrix on the top boundary.
Eigen::MatrixXcd boundary_mass(const PeriodicCellMesh &mesh)
{
  const int n = mesh.nx;
  const double d = mesh.dx();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int c = 0; c < n; c++)
  {
    M(c, c) += 2.0 * d / 3.0;
    M(c, (c + 1) % n) += d / 6.0;
    M((c + 1) % n, c) += d / 6.0;
  }
  return M;
}

}  // namespace

TEST(Beta, Examples)
{
  DtNConfig c{1.0, 1.0, 5};
  EXPECT_NEAR(std::abs(beta(c, 0, 0.0) - cplx(1.0, 0.0)), 0.0, 1e-15);
  const cplx b2 = beta(c, 2, 0.0);
  EXPECT_NEAR(b2.real(), 0.0, 1e-15);
  EXPECT_NEAR(b2.imag(), 1.7320508075688772, 1e-15);
  DtNConfig c6{6.0, 1.0, 10};
  const cplx b6 = beta(c6, 0, 0.25);
  EXPECT_NEAR(b6.real(), 5.9947894, 1e-7);
  EXPECT_EQ(b6.imag(), 0.0);
  // Wood point returns zero.
  EXPECT_EQ(beta(c, 1, 0.0), cplx(0.0));
}

TEST(Beta, NeverInLowerHalfOrNegativeReal)
{
  DtNConfig c{6.0, 1.0, 20};
  for (int q = -20; q <= 20; q++)
  {
    for (double a = -0.5; a <= 0.5; a += 0.0625)
    {
      const cplx b = beta(c, q, a);
      EXPECT_GE(b.real(), 0.0);
      EXPECT_GE(b.imag(), 0.0);
      EXPECT_TRUE(b.real() == 0.0 || b.imag() == 0.0);
    }
  }
}

TEST(DtNConfig, DefaultsAndValidation)
{
  EXPECT_EQ(make_dtn_config(1.0, kPeriod, 40).J, 20);
  EXPECT_EQ(make_dtn_config(1.0, kPeriod, 400).J, 60);
  EXPECT_EQ(make_dtn_config(6.0, kPeriod, 4).J, 8);
  EXPECT_EQ(make_dtn_config(6.0, kPeriod, 40, 12).J, 12);
  EXPECT_NEAR(make_dtn_config(1.0, kPeriod, 4).lambda_star, 1.0, 1e-15);
  EXPECT_THROW(make_dtn_config(6.0, kPeriod, 40, 7), ParameterError);
  EXPECT_NO_THROW(make_dtn_config(6.0, kPeriod, 40, 8));
  EXPECT_THROW(make_dtn_config(-1.0, kPeriod, 40), ParameterError);
}

TEST(BoundaryFourier, ConstantIsExact)
{
  const PeriodicCellMesh mesh = mesh_with(10);
  const std::vector<cplx> ones(mesh.nx, 1.0);
  const auto c = boundary_fourier_coeffs(mesh, ones, 7);
  ASSERT_EQ(c.size(), 15u);
  for (int q = -7; q <= 7; q++)
  {
    EXPECT_LE(std::abs(c[q + 7] - (q == 0 ? 1.0 : 0.0)), 1e-14) << q;
  }
  EXPECT_THROW(boundary_fourier_coeffs(mesh, std::vector<cplx>(3, 1.0), 2), ParameterError);
}

TEST(BoundaryFourier, ModeInterpolationIsSecondOrder)
{
  std::vector<double> err;
  for (int nx : {8, 16, 32})
  {
    const PeriodicCellMesh mesh = mesh_with(nx);
    const Eigen::VectorXcd v = mode(mesh, 1);
    const std::vector<cplx> vals(v.data(), v.data() + nx);
    const auto c = boundary_fourier_coeffs(mesh, vals, 3);
    double e = std::abs(c[1 + 3] - 1.0);
    for (int q = -3; q <= 3; q++)
    {
      if (q != 1)
      {
        e = std::max(e, std::abs(c[q + 3]));
      }
    }
    err.push_back(e);
    // The interpolant's own coefficient is exactly sinc^2(dx / 2).
    const double u = 0.5 * mesh.dx();
    EXPECT_NEAR(std::abs(c[1 + 3] - std::pow(std::sin(u) / u, 2)), 0.0, 1e-14);
  }
  EXPECT_GE(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GE(std::log2(err[1] / err[2]), 1.8);
}

TEST(BoundaryFourier, Linear)
{
  const PeriodicCellMesh mesh = mesh_with(12);
  std::mt19937 gen(1);
  std::normal_distribution<double> n;
  std::vector<cplx> a(12), b(12), s(12);
  const cplx ca(0.5, 2.0), cb(-1.0, 0.1);
  for (int i = 0; i < 12; i++)
  {
    a[i] = {n(gen), n(gen)};
    b[i] = {n(gen), n(gen)};
    s[i] = ca * a[i] + cb * b[i];
  }
  const auto fa = boundary_fourier_coeffs(mesh, a, 6);
  const auto fb = boundary_fourier_coeffs(mesh, b, 6);
  const auto fs = boundary_fourier_coeffs(mesh, s, 6);
  for (std::size_t q = 0; q < fs.size(); q++)
  {
    EXPECT_LE(std::abs(fs[q] - ca * fa[q] - cb * fb[q]), 1e-14);
  }
}

TEST(DtNMatrix, SymbolConsistency)
{
  // v^H Q v / v^H M v -> -i beta_q for the discrete mode q.
  struct Case
  {
    double k;
    int q;
    double alpha;
  };
  for (const Case cs : {Case{6.0, 1, 0.25}, Case{6.0, -3, 0.25}, Case{6.0, 8, 0.25}, Case{1.0, 2, 0.1}})
  {
    std::vector<double> err;
    for (int nx : {16, 32, 64})
    {
      const PeriodicCellMesh mesh = mesh_with(nx);
      const DtNConfig c = make_dtn_config(cs.k, kPeriod, nx);
      const Eigen::MatrixXcd Q = to_eigen(dtn_bilinear_matrix(c, mesh, cs.alpha));
      const Eigen::VectorXcd v = mode(mesh, cs.q);
      const cplx ratio = v.dot(Q * v) / v.dot(boundary_mass(mesh) * v);
      const cplx want = -cplx(0.0, 1.0) * beta(c, cs.q, cs.alpha);
      err.push_back(std::abs(ratio - want) / std::abs(want));
    }
    EXPECT_GE(std::log2(err[0] / err[1]), 1.8) << "k=" << cs.k << " q=" << cs.q;
    EXPECT_GE(std::log2(err[1] / err[2]), 1.8) << "k=" << cs.k << " q=" << cs.q;
  }
}

TEST(DtNMatrix, ConstantModeForm)
{
  // phi = 1 has a single Fourier coefficient, so the form is exact.
  const PeriodicCellMesh mesh = mesh_with(20);
  const DtNConfig c = make_dtn_config(6.0, kPeriod, 20);
  const Eigen::MatrixXcd Q = to_eigen(dtn_bilinear_matrix(c, mesh, 0.25));
  const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(20);
  const cplx form = one.dot(Q * one);
  EXPECT_NEAR(form.real(), 0.0, 1e-12);
  EXPECT_NEAR(form.imag(), -5.9947894 * kPeriod, 1e-6);
}

TEST(DtNMatrix, HermitianSplit)
{
  for (double alpha : {-0.45, 0.05, 0.35})
  {
    const PeriodicCellMesh mesh = mesh_with(24);
    const DtNConfig c = make_dtn_config(6.0, kPeriod, 24);
    const DtNParts parts = dtn_bilinear_parts(c, mesh, alpha);
    const Eigen::MatrixXcd P = to_eigen(parts.propagating);
    const Eigen::MatrixXcd E = to_eigen(parts.evanescent);
    EXPECT_LE((P + P.adjoint()).norm(), 1e-12 * P.norm());
    EXPECT_LE((E - E.adjoint()).norm(), 1e-12 * E.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (E + E.adjoint()));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * E.norm());
    const Eigen::MatrixXcd Q = to_eigen(dtn_bilinear_matrix(c, mesh, alpha));
    EXPECT_LE((Q - P - E).norm(), 1e-13 * Q.norm());
  }
}

TEST(DtNMatrix, EvanescentFormHasNonnegativeRealPart)
{
  const PeriodicCellMesh mesh = mesh_with(16);
  const DtNConfig c = make_dtn_config(6.0, kPeriod, 16);
  const Eigen::MatrixXcd E = to_eigen(dtn_bilinear_parts(c, mesh, 0.3).evanescent);
  std::mt19937 gen(5);
  std::normal_distribution<double> n;
  for (int s = 0; s < 50; s++)
  {
    Eigen::VectorXcd v(16);
    for (int i = 0; i < 16; i++)
    {
      v(i) = {n(gen), n(gen)};
    }
    EXPECT_GE(v.dot(E * v).real(), -1e-12 * E.norm() * v.squaredNorm());
  }
}

TEST(DtNMatrix, RankBoundedByModeCount)
{
  const PeriodicCellMesh mesh = mesh_with(32);
  const DtNConfig c = make_dtn_config(1.0, kPeriod, 32, 3);
  const Eigen::MatrixXcd Q = to_eigen(dtn_bilinear_matrix(c, mesh, 0.1));
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(Q);
  lu.setThreshold(1e-10);
  EXPECT_LE(lu.rank(), 7);
}

TEST(DtNMatrix, IntervalIntegralMatchesFineQuadrature)
{
  const PeriodicCellMesh mesh = mesh_with(12);
  const DtNConfig c = make_dtn_config(1.0, kPeriod, 12);
  const double lo = 0.05, hi = 0.15;
  const Eigen::MatrixXcd G = to_eigen(dtn_interval_matrix(c, mesh, hat_fourier_table(mesh, c.J), lo, hi));
  Eigen::MatrixXcd fine = Eigen::MatrixXcd::Zero(12, 12);
  const int n = 400;
  for (int i = 0; i < n; i++)
  {
    fine += to_eigen(dtn_bilinear_matrix(c, mesh, lo + (i + 0.5) * (hi - lo) / n)) * ((hi - lo) / n);
  }
  EXPECT_LE((G - fine).norm(), 1e-7 * fine.norm());
}
