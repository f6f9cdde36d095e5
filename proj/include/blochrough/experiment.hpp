// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BLOCHROUGH_EXPERIMENT_HPP
#define BLOCHROUGH_EXPERIMENT_HPP

#include <string>
#include <utility>
#include <vector>
#include "blochrough/bloch_transform.hpp"
#include "blochrough/linear_solver.hpp"
#include "blochrough/postprocess.hpp"
#include "blochrough/surface_geometry.hpp"
#include "blochrough/types.hpp"

namespace blochrough
{

// "constant": zeta = mean. "sine": zeta = mean + amplitude sin(frequency t).
struct SurfaceSpec
{
  std::string kind = "constant";
  double mean = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;

  bool operator==(const SurfaceSpec &) const = default;
};

SurfaceProfile make_profile(const SurfaceSpec &spec);

enum class CouplingMode
{
  automatic,  // explicit blocks when N <= 16 and M' <= 5000
  explicit_blocks,
  matrix_free
};

enum class PreconditionerKind
{
  ilu0,
  block_lu,
  none
};

struct ExperimentConfig
{
  double k = 0.0;
  SurfaceSpec surface;
  Point2 source;
  double period = 2.0 * pi;
  double H = 3.0;
  double H0 = 2.95;
  double h0 = 1.0;
  double h = 0.16;
  int N = 10;
  int J_dtn = 0;  // 0 selects the default cutoff
  int N_bc = 2000;
  SolverOptions solver;
  CouplingMode coupling = CouplingMode::automatic;
  PreconditionerKind preconditioner = PreconditionerKind::ilu0;
  std::string csv_path;

  bool operator==(const ExperimentConfig &) const = default;
};

// Throws ParseError naming the offending key.
void validate(const ExperimentConfig &config);

// The four reference examples (1..4) at h = 0.16, N = 10. Throws ParameterError otherwise.
ExperimentConfig preset(int example);

// Line-oriented "key = value" text with '#' comments. A "preset" key seeds all values from
// preset(n), other keys override it. Without a preset, k, surface, source, h and N are required.
ExperimentConfig parse_config(const std::string &text);
std::string emit_config(const ExperimentConfig &config);

struct ExperimentReport
{
  double err = 0.0;
  int iterations = 0;
  double residual = 0.0;
  double true_residual = 0.0;
  bool converged = false;
  bool stagnated = false;
  int M_prime = 0;
  std::size_t unknowns = 0;
  bool explicit_coupling = false;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> stage_seconds;
  BlochField solution;

  ConvergenceRow row(const ExperimentConfig &config) const;
};

// geometry -> mesh -> data -> assembly -> solve -> error. Module errors are rethrown as
// StageError carrying the stage name. A solve that misses the tolerance is reported, not thrown.
ExperimentReport run_experiment(const ExperimentConfig &config);

// Rough peak memory of one run in bytes.
double estimate_memory_bytes(const ExperimentConfig &config);

// Visits every (h, N) pair; failed cells get a NaN error and a message in failures.
ConvergenceTable sweep(const ExperimentConfig &base, const std::vector<double> &h_list,
                       const std::vector<int> &N_list, std::vector<std::string> *failures = nullptr);

// Reference grid h in {0.16, 0.08, 0.04, 0.02}, N in {10, 20, 40, 80} without the cells whose
// estimated memory exceeds budget_bytes.
std::vector<std::pair<double, int>> default_sweep_cells(const ExperimentConfig &base,
                                                        double budget_bytes);

}  // namespace blochrough

#endif  // BLOCHROUGH_EXPERIMENT_HPP
