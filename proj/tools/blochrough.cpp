// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

// Command line driver: single solves, the reference examples, sweeps and rate fits.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include "blochrough/errors.hpp"
#include "blochrough/experiment.hpp"
#include "blochrough/log.hpp"
#include "blochrough/postprocess.hpp"

using namespace blochrough;

namespace
{

std::string read_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParameterError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_report(const ExperimentConfig &c, const ExperimentReport &r)
{
  std::cout << std::setprecision(6);
  std::cout << "k=" << c.k << " h=" << c.h << " N=" << c.N << " M'=" << r.M_prime
            << " unknowns=" << r.unknowns
            << " coupling=" << (r.explicit_coupling ? "explicit" : "matrix-free") << '\n';
  std::cout << "err=" << std::scientific << r.err << std::defaultfloat
            << " iterations=" << r.iterations << " residual=" << r.residual
            << " true_residual=" << r.true_residual << (r.converged ? "" : " NOT CONVERGED")
            << (r.stagnated ? " (stagnated)" : "") << '\n';
  for (const auto &[name, s] : r.stage_seconds)
  {
    std::cout << "  " << std::left << std::setw(9) << name << std::right << s << " s\n";
  }
  std::cout << "  total    " << r.seconds << " s\n";
}

int solve_one(const ExperimentConfig &c)
{
  const ExperimentReport r = run_experiment(c);
  print_report(c, r);
  if (!c.csv_path.empty())
  {
    ConvergenceTable t;
    t.add(r.row(c));
    std::ofstream os(c.csv_path);
    t.write_csv(os);
  }
  return r.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Bloch-transform finite element solver for rough-surface scattering"};
  app.require_subcommand(1);
  // -h is taken by the mesh width.
  app.set_help_flag("--help", "Print this help message and exit");
  int verbose = 0;
  app.add_flag("-v,--verbose", verbose, "More output (repeatable)");

  std::string config_path, csv_path, axis = "N", precond;
  int example = 1;
  double h = 0.0;
  int N = 0;
  std::vector<double> h_list;
  std::vector<int> N_list;

  auto *solve = app.add_subcommand("solve", "Run one configuration file");
  solve->add_option("--config", config_path, "key = value configuration")->required();
  solve->add_option("--csv", csv_path, "Write a one-row CSV");

  auto *ex = app.add_subcommand("example", "Run one of the four reference examples");
  ex->add_option("number", example, "1..4")->required()->check(CLI::Range(1, 4));
  ex->add_option("--h", h, "Mesh width");
  ex->add_option("--N", N, "Number of quasi-periodicities (even)");
  ex->add_option("--csv", csv_path, "Write a one-row CSV");
  ex->add_option("--preconditioner", precond, "ilu0, block_lu or none")
      ->check(CLI::IsMember({"ilu0", "block_lu", "none"}));

  auto *sw = app.add_subcommand("sweep", "Run a grid of (h, N) cells");
  sw->add_option("--config", config_path, "Base configuration")->required();
  sw->add_option("--h-list", h_list, "Mesh widths")->required()->delimiter(',');
  sw->add_option("--N-list", N_list, "Values of N")->required()->delimiter(',');
  sw->add_option("--csv", csv_path, "Output CSV (rewritten after each cell)");

  auto *rates = app.add_subcommand("rates", "Fit convergence rates from a sweep CSV");
  rates->add_option("--csv", csv_path, "Sweep CSV")->required();
  rates->add_option("--axis", axis, "N or h")->check(CLI::IsMember({"N", "h"}));

  CLI11_PARSE(app, argc, argv);
  log::set_verbosity(verbose);

  try
  {
    if (solve->parsed())
    {
      ExperimentConfig c = parse_config(read_file(config_path));
      if (!csv_path.empty())
        c.csv_path = csv_path;
      return solve_one(c);
    }
    if (ex->parsed())
    {
      ExperimentConfig c = preset(example);
      if (h > 0.0)
        c.h = h;
      if (N > 0)
        c.N = N;
      c.csv_path = csv_path;
      if (precond == "block_lu")
        c.preconditioner = PreconditionerKind::block_lu;
      else if (precond == "none")
        c.preconditioner = PreconditionerKind::none;
      validate(c);
      return solve_one(c);
    }
    if (sw->parsed())
    {
      ExperimentConfig c = parse_config(read_file(config_path));
      if (!csv_path.empty())
        c.csv_path = csv_path;
      std::vector<std::string> failures;
      const ConvergenceTable t = sweep(c, h_list, N_list, &failures);
      t.write_csv(std::cout);
      for (const auto &f : failures)
      {
        std::cerr << "warning: " << f << '\n';
      }
      return failures.empty() ? 0 : 3;
    }
    if (rates->parsed())
    {
      std::ifstream in(csv_path);
      if (!in)
      {
        throw ParameterError("cannot open '" + csv_path + "'");
      }
      const ConvergenceTable t = ConvergenceTable::read_csv(in);
      const RateFit fit = convergence_rates(t, axis[0]);
      std::cout << "slope " << fit.slope << '\n';
      for (double s : fit.successive)
      {
        std::cout << "successive " << s << '\n';
      }
      return 0;
    }
  }
  catch (const StageError &e)
  {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 2;
  }
  catch (const std::exception &e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
