// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo model of the polarimeter runs and the count-reduction pipeline
// that turns detector counts into noise/disturbance estimates.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emur/entropy.hpp"
#include "emur/qubit.hpp"

namespace emur {

enum class Mode { Noise, Disturbance };

std::string to_string(Mode mode);

// Random streams: std::mt19937_64 seeded through std::seed_seq, with Poisson
// and uniform variates from Boost.Random. Both are specified bit-for-bit, so
// a (seed, config) pair replays identically everywhere.
inline constexpr const char *kRngAlgorithm = "mt19937_64-boost-v1";

enum class SequenceSource { Generated, Replayed };

struct RunConfig {
  Mode mode = Mode::Noise;
  std::vector<double> theta_grid;
  double t_meas_s = 400.0;
  double i_max_cps = 350.0;
  double background_cps = 0.0;
  double contrast = 1.0;
  std::uint64_t seed = 1;
  double sys_angle_rad = 0.0;
  int bootstrap_resamples = 1000;
  // false: counts are the exact expected values (no sampling noise).
  bool poisson = true;
  SequenceSource sequence = SequenceSource::Generated;

  // Throws ConfigurationError naming the offending field.
  void validate() const;

  // Reference apparatus settings for the noise and disturbance runs.
  static RunConfig reference_noise();
  static RunConfig reference_disturbance(double t_meas_s = 400.0);
};

enum class Provenance { Generated, ReplayedRecorded };

struct BlindedSequence {
  // Eigenvalue (+1 or -1) of the prepared input state, one per grid point.
  std::vector<int> labels;
  Provenance provenance = Provenance::Generated;
};

// Uniform +-1 labels from the seeded generator, or the recorded sequence
// when config.sequence is Replayed.
BlindedSequence generate_blinded_sequence(const RunConfig &config);
// Recorded sequences for the 18-point grid.
BlindedSequence recorded_sequence(Mode mode);

struct Channel {
  int m = 0;
  // Final sigma_x outcome; empty in noise mode.
  std::optional<int> bprime;

  bool operator==(const Channel &) const = default;
};

// {-1, 0, +1} in noise mode, {-1, 0, +1} x {-1, +1} in disturbance mode.
std::vector<Channel> channels(Mode mode);

// Ideal detection probability of each channel for input rho at theta. In
// disturbance mode the optimal correction and a sigma_x analysis follow the
// three-outcome measurement.
std::vector<double> channel_probabilities(Mode mode, double theta,
                                          const QubitState &rho);

struct CountRecord {
  double theta = 0.0;
  int input = 0;
  Channel channel;
  // Integer-valued when sampled; exact expectation when sampling is disabled.
  double counts = 0.0;
  double duration_s = 0.0;
};

// Per-run angle miscalibration, uniform in [-sys_angle_rad, sys_angle_rad].
double systematic_offset(const RunConfig &config);

// Both inputs are measured at every grid point, the blinded one first.
std::vector<CountRecord> simulate_run(const RunConfig &config,
                                      const BlindedSequence &seq);

// Splits records into consecutive runs of equal theta.
std::vector<std::vector<CountRecord>> group_by_theta(std::span<const CountRecord> records);

// Background subtraction, contrast unfolding and normalization for the
// records of one grid point. Noise mode yields p(a, m); disturbance mode
// yields p(b, b'). Rows are the input labels {+1, -1}.
LabeledJointDistribution correct_counts(std::span<const CountRecord> records,
                                        const RunConfig &config);

struct EstimateWithError {
  double value = 0.0;
  double sigma_stat = 0.0;
  double sigma_sys = 0.0;
};

// value = H(row | column) of `joint`; sigma_stat from a parametric bootstrap of
// the raw counts, sigma_sys from the ideal quantity at theta +- sys_angle_rad.
// grid_index selects the bootstrap random streams.
EstimateWithError estimate_tradeoff(const LabeledJointDistribution &joint,
                                    std::span<const CountRecord> records,
                                    const RunConfig &config,
                                    std::size_t grid_index);

// Ideal noise (sigma_z) or disturbance (sigma_x) of the three-outcome family.
double ideal_quantity(Mode mode, double theta);

struct PointEstimate {
  double theta = 0.0;
  EstimateWithError estimate;
};

// correct_counts + estimate_tradeoff for every grid point in `records`.
std::vector<PointEstimate> analyze_records(std::span<const CountRecord> records,
                                           const RunConfig &config);

} // namespace emur
