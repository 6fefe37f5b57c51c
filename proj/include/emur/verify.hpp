// SPDX-License-Identifier: Apache-2.0
//
// Self-check suite run by `emur verify`.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emur/experiment.hpp"

namespace emur {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyConfig {
  // Closed-form equivalence and forward/inverse consistency tolerance.
  double tolerance = 1e-9;
  // Empty means the default 18-point grid.
  std::vector<double> grid;
  // Only the projective saturation identity.
  bool projective_only = false;
  double correction_step = 0.001;
  // Seeds for the Monte Carlo coverage check; 0 skips it.
  int mc_seeds = 3;
};

struct Coverage {
  std::size_t within = 0;
  std::size_t total = 0;
  double fraction() const { return total ? double(within) / double(total) : 0.0; }
};

// Simulates `seeds` runs of `base` (seeds first_seed, first_seed + 1, ...) and
// counts grid-point estimates within 3 sigma_stat of the ideal value.
Coverage monte_carlo_coverage(RunConfig base, std::uint64_t first_seed, int seeds);

std::vector<CheckResult> run_invariant_suite(const VerifyConfig &config);

} // namespace emur
