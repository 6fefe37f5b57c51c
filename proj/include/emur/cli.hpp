// SPDX-License-Identifier: Apache-2.0
//
// Subcommands of the `emur` tool. Exit codes: 0 pass, 1 check or data
// failure, 2 usage or I/O failure.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace emur {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Environment variable overriding the config seed; --seed wins over it.
inline constexpr const char *kSeedEnv = "EMUR_SEED";

struct ScanOptions {
  std::vector<double> grid;
  std::string output;
  bool json = false;
};

struct VerifyOptions {
  double tolerance = 1e-9;
  std::vector<double> grid;
  bool projective_only = false;
  double correction_step = 0.001;
  int mc_seeds = 3;
};

struct SimulateOptions {
  std::string config_path;
  std::string counts_path;
  std::string estimates_path;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

struct AnalyzeOptions {
  std::string counts_path;
  std::string config_path;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

int cmd_scan(const ScanOptions &opt, std::ostream &out, std::ostream &err);
int cmd_verify(const VerifyOptions &opt, std::ostream &out, std::ostream &err);
int cmd_simulate(const SimulateOptions &opt, std::ostream &out, std::ostream &err);
int cmd_analyze(const AnalyzeOptions &opt, std::ostream &out, std::ostream &err);

// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace emur
