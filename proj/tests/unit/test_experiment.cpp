// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <Eigen/SparseLU>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include "blochrough/errors.hpp"
#include "blochrough/experiment.hpp"
#include "blochrough/incident_source.hpp"
#include "blochrough/log.hpp"
#include "blochrough/system_assembly.hpp"

using namespace blochrough;

namespace
{

ExperimentConfig small(int example, double h, int N)
{
  ExperimentConfig c = preset(example);
  c.h = h;
  c.N = N;
  c.N_bc = 200;
  return c;
}

Eigen::SparseMatrix<cplx> to_sparse(const CsrMatrix &A)
{
  std::vector<Eigen::Triplet<cplx>> t;
  for (int i = 0; i < A.rows; i++)
  {
    for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; p++)
    {
      t.emplace_back(i, A.col_idx[p], A.values[p]);
    }
  }
  Eigen::SparseMatrix<cplx> S(A.rows, A.cols);
  S.setFromTriplets(t.begin(), t.end());
  return S;
}

class QuietLog : public ::testing::Test
{
protected:
  void SetUp() override { log::set_verbosity(-1); }
  void TearDown() override { log::set_verbosity(0); }
};

}  // namespace

TEST(Config, EmitParseRoundTrip)
{
  for (int e = 1; e <= 4; e++)
  {
    ExperimentConfig c = preset(e);
    c.h = 0.1234567890123;
    c.N = 20;
    c.J_dtn = 17;
    c.solver.tol = 3e-9;
    c.coupling = CouplingMode::matrix_free;
    c.preconditioner = PreconditionerKind::block_lu;
    c.csv_path = "out.csv";
    EXPECT_EQ(parse_config(emit_config(c)), c) << emit_config(c);
  }
  const ExperimentConfig d = preset(2);
  EXPECT_EQ(parse_config(emit_config(d)), d);
}

TEST(Config, PresetValues)
{
  const ExperimentConfig c = parse_config("preset = example1\n");
  EXPECT_EQ(c.k, 1.0);
  EXPECT_EQ(c.surface.kind, "constant");
  EXPECT_EQ(c.surface.mean, 1.1);
  EXPECT_EQ(c.source, (Point2{0.5, 0.4}));
  EXPECT_EQ(c.h, 0.16);
  EXPECT_EQ(c.N, 10);
  EXPECT_NEAR(c.period, 2.0 * pi, 1e-15);
  EXPECT_EQ(c.H, 3.0);
  EXPECT_EQ(c.H0, 2.95);
  EXPECT_EQ(c.h0, 1.0);
  const ExperimentConfig d = parse_config("# comment\npreset = example4\nN = 40  # inline\n");
  EXPECT_EQ(d.k, 6.0);
  EXPECT_EQ(d.surface.kind, "sine");
  EXPECT_EQ(d.surface.amplitude, 0.1);
  EXPECT_EQ(d.surface.frequency, 2.4);
  EXPECT_EQ(d.source, (Point2{pi, 0.2}));
  EXPECT_EQ(d.N, 40);
  EXPECT_THROW(preset(5), ParameterError);
}

TEST(Config, ErrorsNameKeyAndLine)
{
  try
  {
    parse_config("surface = constant\nsurface_mean = 1.1\nsource = 0.5, 0.4\nh = 0.16\nN = 10\n");
    FAIL();
  }
  catch (const ParseError &e)
  {
    EXPECT_NE(std::string(e.what()).find("'k'"), std::string::npos) << e.what();
  }
  try
  {
    parse_config("preset = example1\n\nfrobnicate = 3\n");
    FAIL();
  }
  catch (const ParseError &e)
  {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("frobnicate"), std::string::npos);
  }
  EXPECT_THROW(parse_config("preset = example1\nN = 10\nN = 20\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\nN = ten\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\nN = 11\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\nh = -1\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\nsource = 0.5\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\nsource = 0.5, 1.5\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\ncoupling = sometimes\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example9\n"), ParseError);
  EXPECT_THROW(parse_config("preset = example1\nno equals sign\n"), ParseError);
  EXPECT_THROW(parse_config("k = 1\nsurface = sine\nsurface_mean = 1\nsource = 0.5, 0.4\nh = 0.5\nN = 2\n"),
               ParseError);
}

TEST_F(QuietLog, FlatSurfaceCoupledEqualsDecoupled)
{
  // With zeta = h0 every alpha block is independent; solve each one directly and compare.
  ExperimentConfig c = small(1, 0.4, 4);
  c.surface = {"constant", 1.0, 0.0, 0.0};
  c.solver.tol = 1e-13;
  const ExperimentReport r = run_experiment(c);
  ASSERT_TRUE(r.converged);

  const PeriodicCellMesh mesh = build_periodic_mesh(c.period, c.h0, c.H, c.h);
  const BlochGrid g = alpha_grid(c.N, c.period);
  const DiagonalBlockAssembler as(mesh, make_dtn_config(c.k, c.period, mesh.nx));
  const DirichletTable t =
      bloch_dirichlet_data(g, mesh, SurfaceProfile::constant(1.0), {c.source, c.k}, c.N_bc);
  const std::vector<cplx> F = assemble_rhs(t, mesh);
  const int Mp = mesh.M_prime;
  ASSERT_EQ(r.M_prime, Mp);
  double diff = 0.0, ref = 0.0;
  for (int j = 0; j < c.N; j++)
  {
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu(to_sparse(as.block(g, j)));
    const Eigen::VectorXcd w = lu.solve(Eigen::Map<const Eigen::VectorXcd>(F.data() + j * Mp, Mp));
    for (int m = 0; m < Mp; m++)
    {
      diff += std::norm(w(m) - r.solution(j, m));
      ref += std::norm(w(m));
    }
  }
  EXPECT_LE(std::sqrt(diff / ref), 1e-10);
  EXPECT_FALSE(r.explicit_coupling);
}

TEST_F(QuietLog, RunsAreDeterministicAndModesAgree)
{
  ExperimentConfig c = small(3, 0.5, 4);
  c.solver.tol = 1e-10;
  c.coupling = CouplingMode::explicit_blocks;
  const ExperimentReport a = run_experiment(c);
  const ExperimentReport b = run_experiment(c);
  EXPECT_EQ(a.solution.coeffs, b.solution.coeffs);
  EXPECT_EQ(a.err, b.err);
  EXPECT_TRUE(a.converged);
  EXPECT_TRUE(a.explicit_coupling);
  c.coupling = CouplingMode::matrix_free;
  const ExperimentReport m = run_experiment(c);
  EXPECT_FALSE(m.explicit_coupling);
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.solution.coeffs.size(); i++)
  {
    diff += std::norm(a.solution.coeffs[i] - m.solution.coeffs[i]);
    ref += std::norm(a.solution.coeffs[i]);
  }
  EXPECT_LE(std::sqrt(diff / ref), 10.0 * c.solver.tol);
  EXPECT_NEAR(a.err, m.err, 1e-8);
  // Every stage is timed.
  std::vector<std::string> names;
  for (const auto &[n, s] : a.stage_seconds)
  {
    names.push_back(n);
    EXPECT_GE(s, 0.0);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"config", "geometry", "mesh", "data", "assembly", "solve", "error"}));
}

TEST_F(QuietLog, PreconditionersAgree)
{
  ExperimentConfig c = small(3, 0.5, 4);
  c.solver.tol = 1e-10;
  const ExperimentReport ilu = run_experiment(c);
  c.preconditioner = PreconditionerKind::block_lu;
  const ExperimentReport lu = run_experiment(c);
  c.preconditioner = PreconditionerKind::none;
  const ExperimentReport none = run_experiment(c);
  ASSERT_TRUE(ilu.converged && lu.converged && none.converged);
  EXPECT_NEAR(ilu.err, lu.err, 1e-7 * lu.err);
  EXPECT_NEAR(none.err, lu.err, 1e-7 * lu.err);
  EXPECT_LT(lu.iterations, ilu.iterations);
}

TEST_F(QuietLog, TraceQuadratureIsConverged)
{
  const ExperimentConfig c = small(3, 0.32, 4);
  const ExperimentReport r = run_experiment(c);
  const PeriodicCellMesh mesh = build_periodic_mesh(c.period, c.h0, c.H, c.h);
  const PointSource src{c.source, c.k};
  auto err_with = [&](int intervals) {
    const auto xs = uniform_samples(intervals, 0.0, c.period);
    const auto w = simpson_weights(intervals, 0.0, c.period);
    const auto num = reconstruct_on_gamma_H(r.solution, mesh, xs);
    std::vector<cplx> ex(xs.size());
    for (std::size_t i = 0; i < xs.size(); i++)
    {
      ex[i] = exact_reference_on_gamma_H(xs[i], src, c.H);
    }
    return relative_L2_error(num, ex, w);
  };
  const double e4 = err_with(4 * mesh.nx), e8 = err_with(8 * mesh.nx);
  EXPECT_NEAR(e4, r.err, 1e-15);
  EXPECT_LT(std::abs(e8 - e4), 0.01 * e4);
}

TEST_F(QuietLog, StageErrorsNameTheStage)
{
  ExperimentConfig c = small(1, 0.5, 4);
  c.N = 3;
  try
  {
    run_experiment(c);
    FAIL();
  }
  catch (const StageError &e)
  {
    EXPECT_EQ(e.stage(), "config");
  }
}

TEST_F(QuietLog, SweepVisitsGridAndWritesCsv)
{
  ExperimentConfig c = small(1, 0.5, 2);
  const auto path = std::filesystem::temp_directory_path() / "blochrough_sweep_test.csv";
  c.csv_path = path.string();
  std::vector<std::string> failures;
  const ConvergenceTable t = sweep(c, {0.8, 0.5}, {2, 4}, &failures);
  EXPECT_TRUE(failures.empty());
  ASSERT_EQ(t.rows().size(), 4u);
  for (const auto &row : t.rows())
  {
    EXPECT_TRUE(std::isfinite(row.err));
    EXPECT_GT(row.err, 0.0);
  }
  std::ifstream in(path);
  const ConvergenceTable back = ConvergenceTable::read_csv(in);
  EXPECT_EQ(back.rows().size(), 4u);
  std::filesystem::remove(path);

  // A failing cell is recorded, not fatal.
  ExperimentConfig bad = small(1, 0.5, 2);
  const ConvergenceTable tb = sweep(bad, {0.5}, {2, 3}, &failures);
  ASSERT_EQ(tb.rows().size(), 2u);
  EXPECT_TRUE(std::isnan(tb.rows()[1].err));
  EXPECT_EQ(failures.size(), 1u);
}

TEST(Memory, EstimateAndDefaultCells)
{
  const ExperimentConfig c = preset(1);
  ExperimentConfig big = c;
  big.N = 80;
  EXPECT_GT(estimate_memory_bytes(c), 0.0);
  EXPECT_GT(estimate_memory_bytes(big), estimate_memory_bytes(c));
  EXPECT_EQ(default_sweep_cells(c, 1e15).size(), 16u);
  const auto few = default_sweep_cells(c, 2e9);
  EXPECT_LT(few.size(), 16u);
  for (const auto &[h, N] : few)
  {
    ExperimentConfig x = c;
    x.h = h;
    x.N = N;
    EXPECT_LE(estimate_memory_bytes(x), 2e9);
  }
}
