// SPDX-License-Identifier: Apache-2.0
#include "emur/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "emur/errors.hpp"
#include "emur/experiment.hpp"
#include "emur/io.hpp"
#include "emur/tradeoff.hpp"
#include "emur/verify.hpp"

namespace emur {

namespace {

bool write_file(const std::string &path, const std::string &content,
                std::ostream &err) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "error: cannot open '" << path << "' for writing\n";
    return false;
  }
  f << content;
  f.flush();
  if (!f) {
    err << "error: failed writing '" << path << "'\n";
    return false;
  }
  return true;
}

std::optional<std::string> check_grid(const std::vector<double> &grid) {
  for (double t : grid)
    if (!(t >= 0.0 && t <= std::numbers::pi / 2.0))
      return "theta " + format_double(t) + " outside [0, pi/2]";
  return std::nullopt;
}

// Config seed, then the environment override, then the flag.
bool resolve_seed(RunConfig &cfg, const std::optional<std::uint64_t> &flag,
                  std::ostream &err) {
  if (const char *env = std::getenv(kSeedEnv); env && *env) {
    char *end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') {
      err << "error: " << kSeedEnv << " is not an unsigned integer\n";
      return false;
    }
    cfg.seed = v;
  }
  if (flag)
    cfg.seed = *flag;
  return true;
}

std::optional<RunConfig> load_run_config(const std::string &path,
                                         const std::optional<std::uint64_t> &seed,
                                         std::ostream &err) {
  try {
    RunConfig cfg = load_config(path);
    if (!resolve_seed(cfg, seed, err))
      return std::nullopt;
    return cfg;
  } catch (const Error &e) {
    err << "error: config '" << path << "': " << e.what() << '\n';
    return std::nullopt;
  }
}

std::string render_estimates(Mode mode, const std::vector<PointEstimate> &points,
                             bool json) {
  std::ostringstream os;
  const auto rows = estimate_rows(mode, points);
  if (json)
    write_estimates_json(os, rows);
  else
    write_estimates_csv(os, rows);
  return os.str();
}

} // namespace

int cmd_scan(const ScanOptions &opt, std::ostream &out, std::ostream &err) {
  const std::vector<double> grid = opt.grid.empty() ? quarter_grid(17) : opt.grid;
  if (const auto bad = check_grid(grid)) {
    err << "error: " << *bad << '\n';
    return kExitUsage;
  }
  const auto rows = frontier_rows(scan_frontier(grid));
  std::ostringstream os;
  if (opt.json)
    write_frontier_json(os, rows);
  else
    write_frontier_csv(os, rows);
  if (!write_file(opt.output, os.str(), err))
    return kExitUsage;
  out << "wrote " << rows.size() << " rows to " << opt.output << '\n';
  return kExitOk;
}

int cmd_verify(const VerifyOptions &opt, std::ostream &out, std::ostream &err) {
  if (const auto bad = check_grid(opt.grid)) {
    err << "error: " << *bad << '\n';
    return kExitUsage;
  }
  if (!(opt.tolerance > 0.0) || !(opt.correction_step > 0.0) ||
      opt.correction_step > std::numbers::pi / 8.0 || opt.mc_seeds < 0) {
    err << "error: tolerance and correction step must be positive (step <= pi/8), "
           "mc-seeds non-negative\n";
    return kExitUsage;
  }
  VerifyConfig cfg;
  cfg.tolerance = opt.tolerance;
  cfg.grid = opt.grid;
  cfg.projective_only = opt.projective_only;
  cfg.correction_step = opt.correction_step;
  cfg.mc_seeds = opt.mc_seeds;

  const auto results = run_invariant_suite(cfg);
  int failures = 0;
  for (const auto &r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) {
      out << ": " << r.detail;
      ++failures;
    }
    out << '\n';
  }
  out << results.size() - failures << '/' << results.size() << " checks passed\n";
  return failures ? kExitFailure : kExitOk;
}

int cmd_simulate(const SimulateOptions &opt, std::ostream &out, std::ostream &err) {
  auto cfg = load_run_config(opt.config_path, opt.seed, err);
  if (!cfg)
    return kExitUsage;

  std::vector<CountRecord> records;
  std::vector<PointEstimate> points;
  try {
    records = simulate_run(*cfg, generate_blinded_sequence(*cfg));
    points = analyze_records(records, *cfg);
  } catch (const ConfigurationError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  std::ostringstream counts;
  write_counts_csv(counts, records);
  if (!write_file(opt.counts_path, counts.str(), err) ||
      !write_file(opt.estimates_path, render_estimates(cfg->mode, points, opt.json),
                  err))
    return kExitUsage;

  std::size_t within = 0;
  for (const auto &p : points)
    if (std::abs(p.estimate.value - ideal_quantity(cfg->mode, p.theta)) <=
        3.0 * p.estimate.sigma_stat + 1e-12)
      ++within;
  out << to_string(cfg->mode) << " run, seed " << cfg->seed << ": " << records.size()
      << " count records, " << within << '/' << points.size()
      << " estimates within 3 sigma of the closed form\n";
  return kExitOk;
}

int cmd_analyze(const AnalyzeOptions &opt, std::ostream &out, std::ostream &err) {
  auto cfg = load_run_config(opt.config_path, opt.seed, err);
  if (!cfg)
    return kExitUsage;

  std::vector<CountRecord> records;
  {
    std::ifstream in(opt.counts_path);
    if (!in) {
      err << "error: cannot open counts file '" << opt.counts_path << "'\n";
      return kExitUsage;
    }
    try {
      records = read_counts_csv(in);
    } catch (const ParseError &e) {
      err << "error: " << opt.counts_path << ": " << e.what() << '\n';
      return kExitUsage;
    }
  }

  std::vector<PointEstimate> points;
  try {
    points = analyze_records(records, *cfg);
  } catch (const ConfigurationError &e) {
    err << "error: counts file does not match the schema: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  if (!write_file(opt.output_path, render_estimates(cfg->mode, points, opt.json), err))
    return kExitUsage;
  out << "wrote " << points.size() << " estimates to " << opt.output_path << '\n';
  return kExitOk;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Entropic noise-disturbance trade-off of qubit instruments"};
  app.require_subcommand(1);

  ScanOptions scan;
  int scan_steps = 17;
  auto *scan_cmd = app.add_subcommand("scan", "Write the noise-disturbance frontier");
  scan_cmd->add_option("-o,--output", scan.output, "Frontier CSV path")->required();
  scan_cmd->add_option("--steps", scan_steps, "Intervals of the grid over [0, pi/2]")
      ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--theta", scan.grid, "Explicit theta values (radians)");
  scan_cmd->add_flag("--json", scan.json, "Write JSON instead of CSV");

  VerifyOptions verify;
  int verify_steps = 0;
  auto *verify_cmd = app.add_subcommand("verify", "Run the invariant suite");
  verify_cmd->add_option("--tolerance", verify.tolerance,
                         "Closed-form equivalence tolerance");
  verify_cmd->add_option("--steps", verify_steps, "Intervals of the grid over [0, pi/2]")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--theta", verify.grid, "Explicit theta values (radians)");
  verify_cmd->add_option("--correction-step", verify.correction_step,
                         "Grid step of the correction search (radians)");
  verify_cmd->add_option("--mc-seeds", verify.mc_seeds,
                         "Seeds for the Monte Carlo coverage check (0 skips)");
  verify_cmd->add_flag("--projective-only", verify.projective_only,
                       "Only check projective saturation");

  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  auto *sim_cmd = app.add_subcommand("simulate", "Simulate a run and estimate N or D");
  sim_cmd->add_option("-c,--config", sim.config_path, "Run config file")->required();
  sim_cmd->add_option("--counts", sim.counts_path, "Counts CSV output")->required();
  sim_cmd->add_option("--estimates", sim.estimates_path, "Estimates output")->required();
  auto *sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "Override the seed");
  sim_cmd->add_flag("--json", sim.json, "Write estimates as JSON");

  AnalyzeOptions an;
  std::uint64_t an_seed = 0;
  auto *an_cmd = app.add_subcommand("analyze", "Estimate N or D from a counts CSV");
  an_cmd->add_option("counts", an.counts_path, "Counts CSV")->required();
  an_cmd->add_option("-c,--config", an.config_path, "Run config file")->required();
  an_cmd->add_option("-o,--output", an.output_path, "Estimates output")->required();
  auto *an_seed_opt = an_cmd->add_option("--seed", an_seed, "Override the seed");
  an_cmd->add_flag("--json", an.json, "Write estimates as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*scan_cmd) {
    if (scan.grid.empty())
      scan.grid = quarter_grid(scan_steps);
    return cmd_scan(scan, out, err);
  }
  if (*verify_cmd) {
    if (verify.grid.empty() && verify_steps > 0)
      verify.grid = quarter_grid(verify_steps);
    return cmd_verify(verify, out, err);
  }
  if (*sim_cmd) {
    if (*sim_seed_opt)
      sim.seed = sim_seed;
    return cmd_simulate(sim, out, err);
  }
  if (*an_seed_opt)
    an.seed = an_seed;
  return cmd_analyze(an, out, err);
}

} // namespace emur
