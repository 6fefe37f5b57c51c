// SPDX-License-Identifier: Apache-2.0
#include "emur/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/random/poisson_distribution.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "emur/errors.hpp"
#include "emur/instrument.hpp"
#include "emur/tradeoff.hpp"

namespace emur {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr std::array<int, 2> kInputLabels{+1, -1};

// Stream tags keep the generators for different purposes disjoint.
enum StreamTag : std::uint32_t {
  kTagSequence = 1,
  kTagOffset = 2,
  kTagCounts = 3,
  kTagBootstrap = 4,
};

std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0,
                            std::uint64_t b = 0) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), static_cast<std::uint32_t>(tag),
                    lo(a),    hi(a),    lo(b),
                    hi(b)};
  return std::mt19937_64(seq);
}

double sample_poisson(std::mt19937_64 &rng, double mean) {
  if (mean <= 0.0)
    return 0.0;
  boost::random::poisson_distribution<std::int64_t, double> dist(mean);
  return static_cast<double>(dist(rng));
}

BlochVector input_direction(Mode mode, int label) {
  const BlochVector axis =
      mode == Mode::Noise ? BlochVector::unit_z() : BlochVector::unit_x();
  return axis * static_cast<double>(label);
}

QubitState depolarized_input(Mode mode, int label, double contrast) {
  return QubitState::from_bloch(input_direction(mode, label) * contrast);
}

double clamp_theta(double theta) { return std::clamp(theta, 0.0, kHalfPi); }

// Ideal channel response of the apparatus at one theta.
class ChannelModel {
public:
  ChannelModel(Mode mode, double theta)
      : mode_(mode), theta_(clamp_theta(theta)),
        inst_(luders_instrument(three_outcome_povm(theta_))),
        corr_(optimal_correction(theta_)), channels_(channels(mode)) {}

  const std::vector<Channel> &channel_list() const { return channels_; }

  std::vector<double> probabilities(const QubitState &rho) const {
    std::vector<double> p;
    p.reserve(channels_.size());
    for (const auto &ch : channels_) {
      if (mode_ == Mode::Noise) {
        p.push_back(born_probability(inst_.induced_effect(ch.m), rho));
      } else {
        const QubitOperator out = corr_.apply(ch.m, inst_.apply_branch(ch.m, rho.op()));
        const QubitOperator proj =
            projector_from_direction(BlochVector::unit_x() * static_cast<double>(*ch.bprime));
        p.push_back(std::clamp((out * proj).trace().real(), 0.0, 1.0));
      }
    }
    return p;
  }

  // Response to the maximally mixed input; what a fully depolarized beam adds.
  std::vector<double> unpolarized() const {
    return probabilities(QubitState::maximally_mixed());
  }

private:
  Mode mode_;
  double theta_;
  QuantumInstrument inst_;
  CorrectionMap corr_;
  std::vector<Channel> channels_;
};

// Counts of one grid point arranged as [input index][channel index].
struct GridCounts {
  double theta = 0.0;
  std::array<std::vector<double>, 2> counts;
  std::array<std::vector<double>, 2> duration;
};

std::size_t input_index(int label) {
  if (label == +1)
    return 0;
  if (label == -1)
    return 1;
  throw ConfigurationError("input label must be +1 or -1, got " + std::to_string(label));
}

GridCounts arrange(std::span<const CountRecord> records, Mode mode) {
  if (records.empty())
    throw ConfigurationError("no count records for grid point");
  const auto chans = channels(mode);
  GridCounts g;
  g.theta = records.front().theta;
  std::array<std::vector<bool>, 2> seen;
  for (std::size_t i = 0; i < 2; ++i) {
    g.counts[i].assign(chans.size(), 0.0);
    g.duration[i].assign(chans.size(), 0.0);
    seen[i].assign(chans.size(), false);
  }
  for (const auto &r : records) {
    if (r.theta != g.theta)
      throw ConfigurationError("records of one grid point have different theta");
    const auto it = std::find(chans.begin(), chans.end(), r.channel);
    if (it == chans.end())
      throw ConfigurationError("channel m=" + std::to_string(r.channel.m) +
                               " is not valid in " + to_string(mode) + " mode");
    const std::size_t i = input_index(r.input);
    const auto c = static_cast<std::size_t>(it - chans.begin());
    if (seen[i][c])
      throw ConfigurationError("duplicate channel record at theta " +
                               std::to_string(g.theta));
    if (!(r.counts >= 0.0) || !(r.duration_s > 0.0))
      throw ConfigurationError("counts must be >= 0 and duration > 0");
    seen[i][c] = true;
    g.counts[i][c] = r.counts;
    g.duration[i][c] = r.duration_s;
  }
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t c = 0; c < chans.size(); ++c)
      if (!seen[i][c])
        throw ConfigurationError("missing channel m=" + std::to_string(chans[c].m) +
                                 (chans[c].bprime
                                      ? " b'=" + std::to_string(*chans[c].bprime)
                                      : std::string()) +
                                 " for input " + std::to_string(kInputLabels[i]) +
                                 " at theta " + std::to_string(g.theta));
  return g;
}

LabeledJointDistribution corrected_table(const GridCounts &g,
                                         const std::vector<double> &unpolarized,
                                         const std::vector<Channel> &chans,
                                         const RunConfig &config) {
  const double c = config.contrast;
  const std::size_t n = chans.size();
  std::array<std::vector<double>, 2> cond;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<double> v(n);
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = std::max(0.0, g.counts[i][k] - config.background_cps * g.duration[i][k]);
      s += v[k];
    }
    if (!(s > 0.0))
      throw DegenerateData("no counts left after background subtraction for input " +
                           std::to_string(kInputLabels[i]) + " at theta " +
                           std::to_string(g.theta));
    double s2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = std::max(0.0, (v[k] / s - (1.0 - c) * unpolarized[k]) / c);
      s2 += v[k];
    }
    if (!(s2 > 0.0))
      throw DegenerateData("contrast unfolding removed all counts for input " +
                           std::to_string(kInputLabels[i]) + " at theta " +
                           std::to_string(g.theta));
    for (double &x : v)
      x /= s2;
    cond[i] = std::move(v);
  }

  const std::vector<int> rows(kInputLabels.begin(), kInputLabels.end());
  if (config.mode == Mode::Noise) {
    std::vector<int> cols;
    for (const auto &ch : chans)
      cols.push_back(ch.m);
    std::vector<double> table;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < n; ++k)
        table.push_back(0.5 * cond[i][k]);
    return LabeledJointDistribution(rows, cols, std::move(table));
  }
  std::vector<double> table(4, 0.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < n; ++k)
      table[2 * i + (*chans[k].bprime == +1 ? 0 : 1)] += 0.5 * cond[i][k];
  return LabeledJointDistribution(rows, {+1, -1}, std::move(table));
}

} // namespace

std::string to_string(Mode mode) {
  return mode == Mode::Noise ? "noise" : "disturbance";
}

void RunConfig::validate() const {
  if (theta_grid.empty())
    throw ConfigurationError("theta_steps: grid is empty");
  for (double t : theta_grid)
    if (!(t >= 0.0 && t <= kHalfPi))
      throw ConfigurationError("theta_steps: grid value " + std::to_string(t) +
                               " outside [0, pi/2]");
  if (!(t_meas_s > 0.0))
    throw ConfigurationError("t_meas_s: must be > 0");
  if (!(i_max_cps > 0.0))
    throw ConfigurationError("i_max_cps: must be > 0");
  if (!(background_cps >= 0.0))
    throw ConfigurationError("background_cps: must be >= 0");
  if (!(contrast > 0.0 && contrast <= 1.0))
    throw ConfigurationError("contrast: must lie in (0, 1]");
  if (!(sys_angle_rad >= 0.0) || !std::isfinite(sys_angle_rad))
    throw ConfigurationError("sys_angle_rad: must be >= 0");
  if (bootstrap_resamples < 1000)
    throw ConfigurationError("bootstrap_resamples: must be >= 1000");
  if (sequence == SequenceSource::Replayed && theta_grid != quarter_grid(17))
    throw ConfigurationError("sequence: replay needs the 18-point default grid");
}

RunConfig RunConfig::reference_noise() {
  RunConfig c;
  c.mode = Mode::Noise;
  c.theta_grid = quarter_grid(17);
  c.t_meas_s = 400.0;
  c.i_max_cps = 350.0;
  c.background_cps = 1.37;
  c.contrast = 0.95;
  return c;
}

RunConfig RunConfig::reference_disturbance(double t_meas_s) {
  RunConfig c;
  c.mode = Mode::Disturbance;
  c.theta_grid = quarter_grid(17);
  c.t_meas_s = t_meas_s;
  c.i_max_cps = 25.0;
  c.background_cps = 0.176;
  c.contrast = 0.97;
  return c;
}

BlindedSequence recorded_sequence(Mode mode) {
  // Index k is theta = k pi / 34.
  if (mode == Mode::Noise)
    return {{+1, -1, -1, +1, -1, +1, -1, -1, +1, -1, -1, +1, -1, -1, -1, +1, -1, -1},
            Provenance::ReplayedRecorded};
  return {{+1, -1, +1, +1, +1, -1, -1, +1, +1, +1, +1, +1, -1, -1, +1, +1, -1, -1},
          Provenance::ReplayedRecorded};
}

BlindedSequence generate_blinded_sequence(const RunConfig &config) {
  if (config.sequence == SequenceSource::Replayed) {
    if (config.theta_grid != quarter_grid(17))
      throw ConfigurationError("sequence: replay needs the 18-point default grid");
    return recorded_sequence(config.mode);
  }
  auto rng = make_stream(config.seed, kTagSequence);
  boost::random::uniform_int_distribution<int> coin(0, 1);
  BlindedSequence seq;
  seq.provenance = Provenance::Generated;
  for (std::size_t i = 0; i < config.theta_grid.size(); ++i)
    seq.labels.push_back(coin(rng) ? +1 : -1);
  return seq;
}

std::vector<Channel> channels(Mode mode) {
  std::vector<Channel> out;
  for (int m : {-1, 0, +1}) {
    if (mode == Mode::Noise)
      out.push_back({m, std::nullopt});
    else
      for (int bp : {-1, +1})
        out.push_back({m, bp});
  }
  return out;
}

std::vector<double> channel_probabilities(Mode mode, double theta,
                                          const QubitState &rho) {
  return ChannelModel(mode, theta).probabilities(rho);
}

double systematic_offset(const RunConfig &config) {
  if (config.sys_angle_rad <= 0.0)
    return 0.0;
  auto rng = make_stream(config.seed, kTagOffset);
  boost::random::uniform_real_distribution<double> u(-config.sys_angle_rad,
                                                     config.sys_angle_rad);
  return u(rng);
}

std::vector<CountRecord> simulate_run(const RunConfig &config,
                                      const BlindedSequence &seq) {
  config.validate();
  if (seq.labels.size() != config.theta_grid.size())
    throw ConfigurationError("blinded sequence length does not match the theta grid");
  const double offset = systematic_offset(config);

  std::vector<CountRecord> out;
  for (std::size_t g = 0; g < config.theta_grid.size(); ++g) {
    const double theta = config.theta_grid[g];
    const ChannelModel model(config.mode, clamp_theta(theta + offset));
    const int first = seq.labels[g];
    if (first != +1 && first != -1)
      throw ConfigurationError("blinded sequence labels must be +1 or -1");
    for (int slot = 0; slot < 2; ++slot) {
      const int input = slot == 0 ? first : -first;
      auto rng = make_stream(config.seed, kTagCounts, g, static_cast<std::uint64_t>(slot));
      const auto p =
          model.probabilities(depolarized_input(config.mode, input, config.contrast));
      for (std::size_t k = 0; k < p.size(); ++k) {
        const double mean =
            config.t_meas_s * (config.i_max_cps * p[k] + config.background_cps);
        out.push_back({theta, input, model.channel_list()[k],
                       config.poisson ? sample_poisson(rng, mean) : mean,
                       config.t_meas_s});
      }
    }
  }
  return out;
}

std::vector<std::vector<CountRecord>> group_by_theta(std::span<const CountRecord> records) {
  std::vector<std::vector<CountRecord>> groups;
  for (const auto &r : records) {
    if (groups.empty() || groups.back().front().theta != r.theta)
      groups.emplace_back();
    groups.back().push_back(r);
  }
  return groups;
}

LabeledJointDistribution correct_counts(std::span<const CountRecord> records,
                                        const RunConfig &config) {
  const GridCounts g = arrange(records, config.mode);
  const ChannelModel model(config.mode, g.theta);
  return corrected_table(g, model.unpolarized(), model.channel_list(), config);
}

double ideal_quantity(Mode mode, double theta) {
  theta = clamp_theta(theta);
  const QuantumInstrument inst = luders_instrument(three_outcome_povm(theta));
  if (mode == Mode::Noise)
    return noise(inst, Observable::sigma_z());
  return disturbance(inst, optimal_correction(theta), Observable::sigma_x());
}

EstimateWithError estimate_tradeoff(const LabeledJointDistribution &joint,
                                    std::span<const CountRecord> records,
                                    const RunConfig &config,
                                    std::size_t grid_index) {
  if (records.empty())
    throw EstimationError("no count records to bootstrap");
  const GridCounts observed = arrange(records, config.mode);
  const ChannelModel model(config.mode, observed.theta);
  const auto unpolarized = model.unpolarized();

  EstimateWithError est;
  est.value = conditional_entropy(joint);

  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(config.bootstrap_resamples));
  std::size_t degenerate = 0;
  GridCounts resampled = observed;
  for (int r = 0; r < config.bootstrap_resamples; ++r) {
    auto rng = make_stream(config.seed, kTagBootstrap, grid_index,
                           static_cast<std::uint64_t>(r));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t k = 0; k < observed.counts[i].size(); ++k)
        resampled.counts[i][k] = sample_poisson(rng, observed.counts[i][k]);
    try {
      samples.push_back(conditional_entropy(
          corrected_table(resampled, unpolarized, model.channel_list(), config)));
    } catch (const DegenerateData &) {
      ++degenerate;
    }
  }
  if (samples.size() < 2)
    throw EstimationError("bootstrap at theta " + std::to_string(observed.theta) +
                          " produced " + std::to_string(degenerate) +
                          " degenerate resamples out of " +
                          std::to_string(config.bootstrap_resamples));
  double mean = 0.0;
  for (double s : samples)
    mean += s;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double s : samples)
    var += (s - mean) * (s - mean);
  est.sigma_stat = std::sqrt(var / static_cast<double>(samples.size() - 1));

  if (config.sys_angle_rad > 0.0) {
    const double hi = ideal_quantity(config.mode, observed.theta + config.sys_angle_rad);
    const double lo = ideal_quantity(config.mode, observed.theta - config.sys_angle_rad);
    est.sigma_sys = 0.5 * std::abs(hi - lo);
  }
  return est;
}

std::vector<PointEstimate> analyze_records(std::span<const CountRecord> records,
                                           const RunConfig &config) {
  const auto groups = group_by_theta(records);
  std::vector<PointEstimate> out;
  out.reserve(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto joint = correct_counts(groups[g], config);
    out.push_back({groups[g].front().theta,
                   estimate_tradeoff(joint, groups[g], config, g)});
  }
  return out;
}

} // namespace emur
