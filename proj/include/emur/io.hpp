// SPDX-License-Identifier: Apache-2.0
//
// Text formats: run configs, counts/frontier/estimates CSV and JSON mirrors.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "emur/experiment.hpp"
#include "emur/tradeoff.hpp"

namespace emur {

inline constexpr const char *kCountsHeader =
    "theta_rad,input_label,channel_m,channel_bprime,counts,duration_s";
inline constexpr const char *kFrontierHeader =
    "theta_rad,source,N_bits,D_bits,g_sum,buscemi_lhs";
inline constexpr const char *kEstimatesHeader =
    "theta_rad,quantity,value_bits,sigma_stat_bits,sigma_sys_bits";

// 17 significant digits; round-trips every double.
std::string format_double(double v);

// Flat `key = value` file, '#' starts a comment. Keys:
//   mode                 noise | disturbance            (required)
//   theta_steps          grid intervals over [0, pi/2]  (default 17)
//   t_meas_s, i_max_cps, background_cps, contrast, sys_angle_rad
//   seed                 unsigned 64-bit integer
//   bootstrap_resamples  >= 1000                         (default 1000)
//   poisson              true | false                    (default true)
//   sequence             random | replay                 (default random)
//   rng                  must equal kRngAlgorithm when present
// Unknown or repeated keys throw ConfigurationError naming the key.
RunConfig parse_config(std::istream &in);
RunConfig load_config(const std::string &path);

void write_counts_csv(std::ostream &out, const std::vector<CountRecord> &records);
// Throws ParseError with the 1-based line number of the first bad line.
std::vector<CountRecord> read_counts_csv(std::istream &in);

struct FrontierRow {
  double theta = 0.0;
  std::string source;
  double noise = 0.0;
  double disturbance = 0.0;
  double g_sum = 0.0;
  double buscemi_lhs = 0.0;
};

// POVM rows (source "brute-force") followed by projective reference rows
// (source "closed-form").
std::vector<FrontierRow> frontier_rows(const Frontier &f);
void write_frontier_csv(std::ostream &out, const std::vector<FrontierRow> &rows);
void write_frontier_json(std::ostream &out, const std::vector<FrontierRow> &rows);

struct EstimateRow {
  double theta = 0.0;
  // "N" for noise runs, "D" for disturbance runs.
  std::string quantity;
  EstimateWithError estimate;
};

std::vector<EstimateRow> estimate_rows(Mode mode,
                                       const std::vector<PointEstimate> &points);
void write_estimates_csv(std::ostream &out, const std::vector<EstimateRow> &rows);
void write_estimates_json(std::ostream &out, const std::vector<EstimateRow> &rows);

} // namespace emur
