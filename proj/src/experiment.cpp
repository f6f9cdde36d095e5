// Copyright The blochrough Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blochrough/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include "blochrough/dtn_operator.hpp"
#include "blochrough/errors.hpp"
#include "blochrough/incident_source.hpp"
#include "blochrough/log.hpp"
#include "blochrough/periodic_mesh.hpp"
#include "blochrough/system_assembly.hpp"

namespace blochrough
{

SurfaceProfile make_profile(const SurfaceSpec &spec)
{
  if (spec.kind == "constant")
  {
    return SurfaceProfile::constant(spec.mean);
  }
  if (spec.kind == "sine")
  {
    return SurfaceProfile::sine(spec.mean, spec.amplitude, spec.frequency);
  }
  throw ParameterError("unknown surface kind '" + spec.kind + "'");
}

void validate(const ExperimentConfig &c)
{
  auto fail = [](const std::string &key, const std::string &msg) {
    throw ParseError(0, "'" + key + "': " + msg);
  };
  if (!(c.k > 0.0) || !std::isfinite(c.k))
  {
    fail("k", "wavenumber must be positive");
  }
  if (!(c.period > 0.0) || !std::isfinite(c.period))
  {
    fail("period", "must be positive");
  }
  if (!(c.h0 > 0.0 && c.h0 < c.H0 && c.H0 < c.H) || !std::isfinite(c.H))
  {
    fail("h0", "heights must satisfy 0 < h0 < H0 < H");
  }
  if (c.N < 2 || c.N % 2 != 0)
  {
    fail("N", "must be even and at least 2");
  }
  if (!(c.h > 0.0 && c.h < c.H - c.h0))
  {
    fail("h", "must satisfy 0 < h < H - h0");
  }
  if (c.J_dtn < 0)
  {
    fail("J_dtn", "must be nonnegative (0 selects the default)");
  }
  if (c.N_bc < c.N / 2)
  {
    fail("N_bc", "must be at least N/2");
  }
  try
  {
    validate(c.solver);
  }
  catch (const ParameterError &e)
  {
    fail("tol", e.what());
  }
  SurfaceProfile profile = SurfaceProfile::constant(1.0);
  try
  {
    profile = make_profile(c.surface);
  }
  catch (const ParameterError &e)
  {
    fail("surface", e.what());
  }
  if (!(profile.sup_height() < c.H0) || !(profile.inf_height() > 0.0))
  {
    fail("surface", "profile must stay inside (0, H0)");
  }
  // The source must sit below both the surface and the bottom line of the band.
  if (!(c.source.x2 > 0.0 && c.source.x2 < std::min(c.h0, profile.inf_height())) ||
      !std::isfinite(c.source.x1))
  {
    fail("source", "need 0 < y2 < min(h0, inf zeta)");
  }
  try
  {
    FlatteningMap map(profile, c.h0, c.H0, c.H);
  }
  catch (const Error &e)
  {
    fail("surface", e.what());
  }
}

ExperimentConfig preset(int example)
{
  if (example < 1 || example > 4)
  {
    throw ParameterError("examples are numbered 1 to 4");
  }
  ExperimentConfig c;
  c.k = (example % 2 == 1) ? 1.0 : 6.0;
  if (example <= 2)
  {
    c.surface = {"constant", 1.1, 0.0, 0.0};
    c.source = {0.5, 0.4};
  }
  else
  {
    c.surface = {"sine", 1.0, 0.1, 2.4};
    c.source = {pi, 0.2};
  }
  return c;
}

namespace
{

std::string trim(const std::string &s)
{
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos)
  {
    return "";
  }
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string &v, int line, const std::string &key)
{
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
  {
    throw ParseError(line, "'" + key + "' expects a number, got '" + v + "'");
  }
  return x;
}

int to_int(const std::string &v, int line, const std::string &key)
{
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
  {
    throw ParseError(line, "'" + key + "' expects an integer, got '" + v + "'");
  }
  return x;
}

const std::set<std::string> &known_keys()
{
  static const std::set<std::string> keys = {
      "preset", "k", "surface", "surface_mean", "surface_amplitude", "surface_frequency",
      "source", "period", "H", "H0", "h0", "h", "N", "J_dtn", "N_bc", "tol", "restart",
      "maxit", "coupling", "preconditioner", "csv"};
  return keys;
}

}  // namespace

ExperimentConfig parse_config(const std::string &text)
{
  std::map<std::string, std::pair<std::string, int>> kv;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw))
  {
    lineno++;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ParseError(lineno, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
    {
      throw ParseError(lineno, "unknown key '" + key + "'");
    }
    if (value.empty())
    {
      throw ParseError(lineno, "'" + key + "' has no value");
    }
    if (!kv.emplace(key, std::make_pair(value, lineno)).second)
    {
      throw ParseError(lineno, "duplicate key '" + key + "'");
    }
  }

  ExperimentConfig c;
  if (auto it = kv.find("preset"); it != kv.end())
  {
    const std::string &v = it->second.first;
    if (v.size() != 8 || v.rfind("example", 0) != 0 || v[7] < '1' || v[7] > '4')
    {
      throw ParseError(it->second.second, "preset must be example1 .. example4");
    }
    c = preset(v[7] - '0');
  }
  else
  {
    for (const char *req : {"k", "surface", "source", "h", "N"})
    {
      if (!kv.count(req))
      {
        throw ParseError(0, std::string("missing required key '") + req + "'");
      }
    }
  }

  auto get = [&](const std::string &key) -> const std::pair<std::string, int> * {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string &key, double &dst) {
    if (auto p = get(key))
    {
      dst = to_double(p->first, p->second, key);
    }
  };
  auto integer = [&](const std::string &key, int &dst) {
    if (auto p = get(key))
    {
      dst = to_int(p->first, p->second, key);
    }
  };

  num("k", c.k);
  if (auto p = get("surface"))
  {
    if (p->first != "constant" && p->first != "sine")
    {
      throw ParseError(p->second, "surface must be 'constant' or 'sine'");
    }
    c.surface = {p->first, 0.0, 0.0, 0.0};
    const std::vector<std::string> need =
        p->first == "constant" ? std::vector<std::string>{"surface_mean"}
                               : std::vector<std::string>{"surface_mean", "surface_amplitude",
                                                          "surface_frequency"};
    for (const auto &key : need)
    {
      if (!kv.count(key))
      {
        throw ParseError(p->second, "surface '" + p->first + "' requires '" + key + "'");
      }
    }
  }
  num("surface_mean", c.surface.mean);
  num("surface_amplitude", c.surface.amplitude);
  num("surface_frequency", c.surface.frequency);
  if (auto p = get("source"))
  {
    std::string v = p->first;
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    std::string a, b, extra;
    if (!(ss >> a >> b) || (ss >> extra))
    {
      throw ParseError(p->second, "'source' expects two numbers 'y1, y2'");
    }
    c.source = {to_double(a, p->second, "source"), to_double(b, p->second, "source")};
  }
  num("period", c.period);
  num("H", c.H);
  num("H0", c.H0);
  num("h0", c.h0);
  num("h", c.h);
  integer("N", c.N);
  if (auto p = get("J_dtn"))
  {
    c.J_dtn = p->first == "auto" ? 0 : to_int(p->first, p->second, "J_dtn");
  }
  integer("N_bc", c.N_bc);
  num("tol", c.solver.tol);
  integer("restart", c.solver.restart);
  integer("maxit", c.solver.maxit);
  if (auto p = get("coupling"))
  {
    if (p->first == "auto")
      c.coupling = CouplingMode::automatic;
    else if (p->first == "explicit")
      c.coupling = CouplingMode::explicit_blocks;
    else if (p->first == "matrix_free")
      c.coupling = CouplingMode::matrix_free;
    else
      throw ParseError(p->second, "coupling must be auto, explicit or matrix_free");
  }
  if (auto p = get("preconditioner"))
  {
    if (p->first == "ilu0")
      c.preconditioner = PreconditionerKind::ilu0;
    else if (p->first == "block_lu")
      c.preconditioner = PreconditionerKind::block_lu;
    else if (p->first == "none")
      c.preconditioner = PreconditionerKind::none;
    else
      throw ParseError(p->second, "preconditioner must be ilu0, block_lu or none");
  }
  if (auto p = get("csv"))
  {
    c.csv_path = p->first;
  }
  validate(c);
  return c;
}

std::string emit_config(const ExperimentConfig &c)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "k = " << c.k << '\n';
  os << "surface = " << c.surface.kind << '\n';
  os << "surface_mean = " << c.surface.mean << '\n';
  if (c.surface.kind == "sine")
  {
    os << "surface_amplitude = " << c.surface.amplitude << '\n';
    os << "surface_frequency = " << c.surface.frequency << '\n';
  }
  os << "source = " << c.source.x1 << ", " << c.source.x2 << '\n';
  os << "period = " << c.period << '\n';
  os << "H = " << c.H << '\n';
  os << "H0 = " << c.H0 << '\n';
  os << "h0 = " << c.h0 << '\n';
  os << "h = " << c.h << '\n';
  os << "N = " << c.N << '\n';
  os << "J_dtn = ";
  if (c.J_dtn == 0)
    os << "auto\n";
  else
    os << c.J_dtn << '\n';
  os << "N_bc = " << c.N_bc << '\n';
  os << "tol = " << c.solver.tol << '\n';
  os << "restart = " << c.solver.restart << '\n';
  os << "maxit = " << c.solver.maxit << '\n';
  static const char *modes[] = {"auto", "explicit", "matrix_free"};
  os << "coupling = " << modes[static_cast<int>(c.coupling)] << '\n';
  static const char *precs[] = {"ilu0", "block_lu", "none"};
  os << "preconditioner = " << precs[static_cast<int>(c.preconditioner)] << '\n';
  if (!c.csv_path.empty())
  {
    os << "csv = " << c.csv_path << '\n';
  }
  return os.str();
}

ConvergenceRow ExperimentReport::row(const ExperimentConfig &config) const
{
  return {config.N, config.h, err, iterations, seconds};
}

namespace
{

using clock_type = std::chrono::steady_clock;

template <class F>
auto stage(const char *name, ExperimentReport &report, F &&f)
{
  const auto t0 = clock_type::now();
  try
  {
    if constexpr (std::is_void_v<decltype(f())>)
    {
      f();
      report.stage_seconds.emplace_back(
          name, std::chrono::duration<double>(clock_type::now() - t0).count());
    }
    else
    {
      auto r = f();
      report.stage_seconds.emplace_back(
          name, std::chrono::duration<double>(clock_type::now() - t0).count());
      return r;
    }
  }
  catch (const StageError &)
  {
    throw;
  }
  catch (const std::exception &e)
  {
    throw StageError(name, e.what());
  }
}

bool use_explicit(const ExperimentConfig &c, int M_prime)
{
  switch (c.coupling)
  {
    case CouplingMode::explicit_blocks:
      return true;
    case CouplingMode::matrix_free:
      return false;
    default:
      return c.N <= 16 && M_prime <= 5000;
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig &config)
{
  const auto t0 = clock_type::now();
  ExperimentReport report;
  stage("config", report, [&] { validate(config); });

  const SurfaceProfile profile = make_profile(config.surface);
  auto field = stage("geometry", report, [&] {
    const double reach = config.period * (config.N / 2 + 1);
    return std::make_unique<CoefficientField>(
        FlatteningMap(profile, config.h0, config.H0, config.H, -reach, reach), config.period);
  });
  auto mesh = stage("mesh", report, [&] {
    return std::make_unique<PeriodicCellMesh>(
        build_periodic_mesh(config.period, config.h0, config.H, config.h));
  });
  const BlochGrid grid = alpha_grid(config.N, config.period);
  const PointSource source{config.source, config.k};
  auto table = stage("data", report, [&] {
    return bloch_dirichlet_data(grid, *mesh, profile, source, config.N_bc);
  });

  BlockSystem sys;
  stage("assembly", report, [&] {
    const DtNConfig dtn = make_dtn_config(config.k, config.period, mesh->nx, config.J_dtn);
    sys.N = config.N;
    sys.M = mesh->M;
    sys.M_prime = mesh->M_prime;
    const DiagonalBlockAssembler assembler(*mesh, dtn);
    sys.diag_blocks.resize(config.N);
    for (int j = 0; j < config.N; j++)
    {
      sys.diag_blocks[j] = assembler.block(grid, j);
    }
    if (!field->is_trivial())
    {
      const std::vector<int> cells = window_cells(config.N);
      report.explicit_coupling = use_explicit(config, mesh->M_prime);
      if (report.explicit_coupling)
      {
        sys.coupling = std::make_shared<CouplingBlocks>(
            assemble_coupling_explicit(*mesh, grid, *field, config.k, cells));
      }
      else
      {
        sys.coupling = std::make_shared<CouplingOperator>(*mesh, grid, *field, config.k, cells);
      }
    }
    sys.rhs = assemble_rhs(table, *mesh);
  });
  report.M_prime = mesh->M_prime;
  report.unknowns = sys.size();

  stage("solve", report, [&] {
    std::unique_ptr<BlockIlu0> ilu;
    std::unique_ptr<BlockLu> lu;
    LinearOperator prec;
    if (config.preconditioner == PreconditionerKind::ilu0)
    {
      ilu = std::make_unique<BlockIlu0>(sys.diag_blocks);
      prec = [&](const cplx *x, cplx *y) { ilu->apply(x, y); };
    }
    else if (config.preconditioner == PreconditionerKind::block_lu)
    {
      lu = std::make_unique<BlockLu>(sys.diag_blocks);
      prec = [&](const cplx *x, cplx *y) { lu->apply(x, y); };
    }
    const LinearOperator op = [&](const cplx *x, cplx *y) { sys.apply(x, y); };
    // The Dirichlet rows are already exact for the right-hand side as initial guess.
    GmresResult res = gmres_solve(op, prec, sys.rhs, config.solver, sys.rhs);
    report.iterations = res.iterations;
    report.residual = res.residual;
    report.true_residual = res.true_residual;
    report.converged = res.converged;
    report.stagnated = res.stagnated;
    report.solution = BlochField(grid, mesh->M_prime);
    report.solution.coeffs = std::move(res.x);
  });

  stage("error", report, [&] {
    const int intervals = 4 * mesh->nx;
    const std::vector<double> xs = uniform_samples(intervals, 0.0, config.period);
    const std::vector<double> w = simpson_weights(intervals, 0.0, config.period);
    const std::vector<cplx> numeric = reconstruct_on_gamma_H(report.solution, *mesh, xs);
    std::vector<cplx> exact(xs.size());
    for (std::size_t i = 0; i < xs.size(); i++)
    {
      exact[i] = exact_reference_on_gamma_H(xs[i], source, config.H);
    }
    report.err = relative_L2_error(numeric, exact, w);
  });
  report.seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
  return report;
}

double estimate_memory_bytes(const ExperimentConfig &c)
{
  const double nx = std::ceil(c.period / c.h), ny = std::ceil((c.H - c.h0) / c.h);
  const double Mp = nx * (ny + 1);
  const double n = c.N * Mp;
  const double vectors = (c.solver.restart + 6) * n * 16.0;
  const double block_nnz = 7.0 * Mp + nx * nx;
  const double blocks = 2.0 * c.N * block_nnz * 20.0;
  const double tables = 10.0 * nx * c.N * (48.0 + 16.0);
  double coupling = 0.0;
  if (c.coupling == CouplingMode::explicit_blocks ||
      (c.coupling == CouplingMode::automatic && c.N <= 16 && Mp <= 5000))
  {
    coupling = double(c.N) * c.N * 7.0 * Mp * 16.0;
  }
  double factors = 0.0;
  if (c.preconditioner == PreconditionerKind::block_lu)
  {
    // Measured fill of the sparse LU is about 12 M' log2(M') entries per block.
    factors = c.N * 12.0 * Mp * std::log2(Mp) * 16.0;
  }
  return vectors + blocks + tables + coupling + factors;
}

ConvergenceTable sweep(const ExperimentConfig &base, const std::vector<double> &h_list,
                       const std::vector<int> &N_list, std::vector<std::string> *failures)
{
  ConvergenceTable table;
  auto flush = [&] {
    if (!base.csv_path.empty())
    {
      std::ofstream os(base.csv_path);
      table.write_csv(os);
    }
  };
  for (double h : h_list)
  {
    for (int N : N_list)
    {
      ExperimentConfig c = base;
      c.h = h;
      c.N = N;
      ConvergenceRow row{N, h, std::numeric_limits<double>::quiet_NaN(), 0, 0.0};
      try
      {
        const ExperimentReport r = run_experiment(c);
        row = r.row(c);
        if (!r.converged && failures)
        {
          std::ostringstream msg;
          msg << "N=" << N << " h=" << h << ": solver stopped at residual " << r.residual;
          failures->push_back(msg.str());
        }
      }
      catch (const std::exception &e)
      {
        if (failures)
        {
          std::ostringstream msg;
          msg << "N=" << N << " h=" << h << ": " << e.what();
          failures->push_back(msg.str());
        }
      }
      table.add(row);
      flush();
    }
  }
  return table;
}

std::vector<std::pair<double, int>> default_sweep_cells(const ExperimentConfig &base,
                                                        double budget_bytes)
{
  std::vector<std::pair<double, int>> cells;
  for (double h : {0.16, 0.08, 0.04, 0.02})
  {
    for (int N : {10, 20, 40, 80})
    {
      ExperimentConfig c = base;
      c.h = h;
      c.N = N;
      if (estimate_memory_bytes(c) <= budget_bytes)
      {
        cells.emplace_back(h, N);
      }
    }
  }
  return cells;
}

}  // namespace blochrough
