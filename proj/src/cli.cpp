#include "rdclass/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rdclass/binary.hpp"
#include "rdclass/csv.hpp"
#include "rdclass/enumeration.hpp"
#include "rdclass/ib.hpp"
#include "rdclass/instance_io.hpp"
#include "rdclass/oracle.hpp"

namespace rdclass {

namespace {

constexpr double kVerifyMiTolerance = 2e-2;
constexpr double kVerifySigmas = 3.0;
constexpr char kDecodingRule[] = "minimum posterior expected cost, ties to the lowest label";

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

Grid parse_grid(const std::string& text, const char* flag) {
  std::istringstream in(text);
  Grid g;
  char c1 = 0, c2 = 0;
  if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.count) || c1 != ':' || c2 != ':' || !in.eof() ||
      in.fail()) {
    throw ValidationError(std::string(flag) + " expects min:max:count, got '" + text + "'");
  }
  if (g.count < 1) throw ValidationError(std::string(flag) + " needs a positive count");
  if (g.count > 1 && !(g.hi > g.lo))
    throw ValidationError(std::string(flag) + " needs max > min");
  return g;
}

CostParameters parse_cost_params(const std::vector<std::string>& items) {
  CostParameters params;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("--cost-param expects name=value, got '" + item + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() - eq - 1)
      throw ValidationError("--cost-param value is not a number in '" + item + "'");
    params[item.substr(0, eq)] = v;
  }
  return params;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open output file " + path);
  file << text;
  file.flush();
  if (!file) throw IoError("cannot write output file " + path);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

void emit_meta(const nlohmann::json& meta, const std::string& path) {
  if (path.empty()) return;
  write_file(path + ".meta.json", meta.dump(2) + "\n");
}

nlohmann::json solver_meta(const SolverOptions& s) {
  return {{"gap_tolerance", s.gap_tolerance},
          {"feasibility_threshold", s.feasibility_threshold},
          {"acceptable_gap", s.acceptable_gap},
          {"relaxation", s.relaxation},
          {"active_tolerance", s.active_tolerance}};
}

double default_step(const ProblemInstance& instance) {
  return instance.compressed_size() <= 2 ? 0.02 : 0.05;
}

struct CheckLog {
  std::ostream& out;
  bool all_passed = true;

  void check(bool ok, const std::string& what) {
    out << (ok ? "PASS " : "FAIL ") << what << '\n';
    all_passed = all_passed && ok;
  }
  void skip(const std::string& what) { out << "SKIP " << what << '\n'; }
};

std::string fmt(double v) {
  const std::string s = format_number(v);
  return s.empty() ? "-" : s;
}

// Solver, grid search and Monte Carlo side by side at one budget.
void verify_budget(const ProblemInstance& instance, double budget, double step,
                   std::size_t samples, std::uint64_t seed, const EnumerationOptions& options,
                   CheckLog& log) {
  const GlobalResult solved = global_solve(instance, budget, options);
  const GridSearchReport grid = grid_search(instance, budget, step);
  const bool solver_ok = solved.status == SolveStatus::optimal;
  const bool grid_ok = grid.feasible_count > 0;

  auto& out = log.out;
  out << "budget " << fmt(budget) << ", grid step " << fmt(step) << '\n';
  out << std::left << std::setw(22) << "" << std::setw(22) << "solver" << "grid\n";
  out << std::setw(22) << "status" << std::setw(22) << to_string(solved.status)
      << (grid_ok ? "feasible" : "infeasible") << " (" << grid.feasible_count << " of "
      << grid.evaluated_count << ")\n";
  out << std::setw(22) << "mi (bits)" << std::setw(22) << (solver_ok ? fmt(solved.best.mi) : "-")
      << (grid_ok ? fmt(grid.best_mi) : "-") << '\n';
  const double grid_cost = grid_ok ? expected_cost(instance, *grid.best_channel, *grid.best_decoder)
                                   : std::nan("");
  out << std::setw(22) << "cost" << std::setw(22)
      << (solver_ok ? fmt(solved.best.achieved_budget) : "-") << fmt(grid_cost) << '\n';
  if (solver_ok) {
    out << std::setw(22) << "kkt residual" << fmt(solved.best.kkt_residual) << '\n';
    out << std::setw(22) << "decoder"
        << format_decoder(*solved.decoder, instance.label_names()) << '\n';
  }
  out << std::right;

  if (solved.status == SolveStatus::numerical_failure) {
    log.check(false, "solver finished without numerical failure");
    return;
  }
  log.check(solver_ok || !grid_ok, "every grid-feasible budget is solver-feasible");
  if (solver_ok && grid_ok) {
    log.check(solved.best.mi <= grid.best_mi + kVerifyMiTolerance,
              "solver mi <= grid mi + " + fmt(kVerifyMiTolerance));
  } else {
    log.skip("mi comparison needs both sides feasible");
  }
  if (solver_ok) {
    const auto mc = monte_carlo_error(instance, *solved.best.channel, *solved.decoder, samples, seed);
    const double gap = std::abs(mc.estimate - solved.best.achieved_budget);
    log.check(gap <= kVerifySigmas * mc.standard_error + 1e-12,
              "monte carlo cost " + fmt(mc.estimate) + " +- " + fmt(mc.standard_error) +
                  " within 3 standard errors of " + fmt(solved.best.achieved_budget));
  } else {
    log.skip("monte carlo needs a solver channel");
  }
}

struct Common {
  std::string instance_path;
  std::string output;
  std::vector<std::string> cost_params;
  unsigned threads = 0;
  bool no_canonical = false;

  ProblemInstance load() const { return load_instance(instance_path, parse_cost_params(cost_params)); }
  EnumerationOptions options() const {
    EnumerationOptions o;
    o.canonical = !no_canonical;
    o.threads = threads;
    return o;
  }
};

void add_instance_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("instance", c.instance_path, "Problem instance JSON file")->required();
  cmd->add_option("--cost-param", c.cost_params, "Cost token value, name=value (repeatable)");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate versus classification cost tradeoffs for finite label/data chains", "rdclass"};
  app.require_subcommand(1);

  double p1 = 0.3;
  int grid_size = 21;
  std::string output;
  auto* binary = app.add_subcommand("binary-curve", "Closed-form binary symmetric curve");
  binary->add_option("--p1", p1, "Label-to-data crossover in [0, 1/2)");
  binary->add_option("--grid-size", grid_size, "Number of p2 values in [0, 1/2]");
  binary->add_option("--output", output, "CSV path (stdout when omitted)");

  Common sweep_args;
  std::string budget_grid;
  bool sweep_verify = false;
  double sweep_step = 0.0;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Optimal mi over a grid of cost budgets");
  add_instance_flags(sweep_cmd, sweep_args);
  sweep_cmd->add_option("--budget-grid", budget_grid, "min:max:count, linear")->required();
  sweep_cmd->add_flag("--no-canonical", sweep_args.no_canonical, "Solve all m^l decoder maps");
  sweep_cmd->add_flag("--verify", sweep_verify, "Cross-check every budget against the oracles");
  sweep_cmd->add_option("--step", sweep_step, "Grid-search step for --verify");
  sweep_cmd->add_option("--samples", samples, "Monte Carlo samples for --verify");
  sweep_cmd->add_option("--seed", seed, "Monte Carlo seed for --verify");
  sweep_cmd->add_option("--threads", sweep_args.threads, "Worker threads (0: all cores)");
  sweep_cmd->add_option("--output", sweep_args.output, "CSV path (stdout when omitted)");

  Common ib_args;
  std::string beta_grid;
  std::uint64_t ib_seed = 0;
  auto* ib_cmd = app.add_subcommand("ib-sweep", "Information bottleneck baseline over beta");
  add_instance_flags(ib_cmd, ib_args);
  ib_cmd->add_option("--beta-grid", beta_grid, "min:max:count, log-spaced (default: 0 and 0.01:1000:40)");
  ib_cmd->add_option("--seed", ib_seed, "Seed for the random restarts");
  ib_cmd->add_option("--output", ib_args.output, "CSV path (stdout when omitted)");

  Common verify_args;
  double epsilon = 0.0;
  double verify_step = 0.0;
  std::size_t verify_samples = 1'000'000;
  std::uint64_t verify_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Compare solver, grid search and Monte Carlo");
  add_instance_flags(verify_cmd, verify_args);
  verify_cmd->add_option("--epsilon", epsilon, "Cost budget")->required();
  verify_cmd->add_option("--step", verify_step, "Grid-search step (default 0.02 for l=2, else 0.05)");
  verify_cmd->add_option("--samples", verify_samples, "Monte Carlo samples");
  verify_cmd->add_option("--seed", verify_seed, "Monte Carlo seed");
  verify_cmd->add_flag("--no-canonical", verify_args.no_canonical, "Solve all m^l decoder maps");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*binary) {
      if (!(p1 >= 0.0 && p1 < 0.5)) throw ValidationError("--p1 must lie in [0, 1/2)");
      if (grid_size < 2) throw ValidationError("--grid-size must be at least 2");
      std::ostringstream csv;
      write_binary_curve(csv, binary_curve(p1, grid_size));
      emit(csv.str(), output, out);
      return kExitOk;
    }

    if (*sweep_cmd) {
      const ProblemInstance instance = sweep_args.load();
      const Grid g = parse_grid(budget_grid, "--budget-grid");
      const EnumerationOptions options = sweep_args.options();
      if (sweep_verify) {
        const double step = sweep_step > 0.0 ? sweep_step : default_step(instance);
        grid_search(instance, 0.0, step);  // size guard before any work
      }
      const TradeoffCurve curve = sweep(instance, linear_grid(g.lo, g.hi, g.count), options);
      std::ostringstream csv;
      write_sweep(csv, curve.points, instance.label_names());
      emit(csv.str(), sweep_args.output, out);
      emit_meta({{"command", "sweep"},
                 {"instance_digest", curve.metadata.instance_digest},
                 {"budget_grid", budget_grid},
                 {"canonical", options.canonical},
                 {"solver", solver_meta(options.solver)},
                 {"decoding", kDecodingRule}},
                sweep_args.output);
      if (!sweep_verify) return kExitOk;
      std::ostream& report = sweep_args.output.empty() ? err : out;
      CheckLog log{report};
      const double step = sweep_step > 0.0 ? sweep_step : default_step(instance);
      for (const auto& p : curve.points)
        verify_budget(instance, p.budget, step, samples, seed, options, log);
      return log.all_passed ? kExitOk : kExitVerifyFailed;
    }

    if (*ib_cmd) {
      const ProblemInstance instance = ib_args.load();
      std::vector<double> betas = default_beta_grid();
      if (!beta_grid.empty()) {
        const Grid g = parse_grid(beta_grid, "--beta-grid");
        if (!(g.lo > 0.0)) throw ValidationError("--beta-grid min must be positive");
        betas = log_grid(g.lo, g.hi, g.count);
      }
      IBOptions ib_options;
      ib_options.seed = ib_seed;
      std::ostringstream csv;
      write_ib(csv, ib_rows(ib_sweep(instance, betas, ib_options)));
      emit(csv.str(), ib_args.output, out);
      emit_meta({{"command", "ib-sweep"},
                 {"instance_digest", instance_digest(instance)},
                 {"beta_grid", beta_grid.empty() ? "default" : beta_grid},
                 {"seed", ib_seed},
                 {"random_restarts", ib_options.random_restarts},
                 {"max_iterations", ib_options.max_iterations},
                 {"tolerance", ib_options.tolerance},
                 {"decoding", kDecodingRule}},
                ib_args.output);
      return kExitOk;
    }

    if (*verify_cmd) {
      const ProblemInstance instance = verify_args.load();
      if (!(epsilon >= 0.0)) throw ValidationError("--epsilon must be nonnegative");
      const double step = verify_step > 0.0 ? verify_step : default_step(instance);
      if (verify_samples == 0) throw ValidationError("--samples must be positive");
      CheckLog log{out};
      out << "instance " << instance_digest(instance) << '\n';
      verify_budget(instance, epsilon, step, verify_samples, verify_seed, verify_args.options(), log);
      out << (log.all_passed ? "verification passed" : "verification FAILED") << '\n';
      return log.all_passed ? kExitOk : kExitVerifyFailed;
    }
  } catch (const OracleRefusal& e) {
    err << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace rdclass
