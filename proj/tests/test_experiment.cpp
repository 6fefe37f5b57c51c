// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emur/errors.hpp"
#include "emur/experiment.hpp"
#include "emur/tradeoff.hpp"

using namespace emur;

namespace {
constexpr double kPi = std::numbers::pi;

RunConfig small_config(Mode mode) {
  RunConfig cfg = mode == Mode::Noise ? RunConfig::reference_noise()
                                      : RunConfig::reference_disturbance();
  cfg.theta_grid = {0.2, kPi / 3, 1.3};
  return cfg;
}

std::vector<CountRecord> at_theta(const std::vector<CountRecord> &records, double theta) {
  std::vector<CountRecord> out;
  for (const auto &r : records)
    if (r.theta == theta)
      out.push_back(r);
  return out;
}
} // namespace

TEST_CASE("reference presets validate") {
  auto n = RunConfig::reference_noise();
  CHECK(n.theta_grid.size() == 18);
  CHECK(n.i_max_cps == 350.0);
  CHECK(n.background_cps == 1.37);
  CHECK(n.contrast == 0.95);
  CHECK_NOTHROW(n.validate());
  auto d = RunConfig::reference_disturbance(800.0);
  CHECK(d.t_meas_s == 800.0);
  CHECK(d.i_max_cps == 25.0);
  CHECK(d.contrast == 0.97);
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("RunConfig validation") {
  auto cfg = RunConfig::reference_noise();
  cfg.bootstrap_resamples = 999;
  CHECK_THROWS_AS(cfg.validate(), ConfigurationError);
  cfg = RunConfig::reference_noise();
  cfg.contrast = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigurationError);
  cfg = RunConfig::reference_noise();
  cfg.theta_grid = {2.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigurationError);
  cfg = RunConfig::reference_noise();
  cfg.theta_grid = {0.1, 0.2};
  cfg.sequence = SequenceSource::Replayed;
  CHECK_THROWS_AS(cfg.validate(), ConfigurationError);
}

TEST_CASE("blinded sequences") {
  auto cfg = RunConfig::reference_noise();
  const auto a = generate_blinded_sequence(cfg);
  const auto b = generate_blinded_sequence(cfg);
  CHECK(a.labels == b.labels);
  CHECK(a.provenance == Provenance::Generated);
  CHECK(a.labels.size() == 18);
  for (int l : a.labels)
    CHECK((l == 1 || l == -1));
  cfg.sequence = SequenceSource::Replayed;
  const auto r = generate_blinded_sequence(cfg);
  CHECK(r.provenance == Provenance::ReplayedRecorded);
  CHECK(r.labels == recorded_sequence(Mode::Noise).labels);
  CHECK(recorded_sequence(Mode::Noise).labels.front() == 1);
  CHECK(recorded_sequence(Mode::Disturbance).labels.size() == 18);
}

TEST_CASE("channel layout") {
  CHECK(channels(Mode::Noise).size() == 3);
  const auto d = channels(Mode::Disturbance);
  REQUIRE(d.size() == 6);
  CHECK(d.front().m == -1);
  CHECK(d.front().bprime == -1);
  double sum = 0.0;
  for (double p : channel_probabilities(Mode::Disturbance, 0.7,
                                        QubitState::pure({1, 0, 0})))
    sum += p;
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("simulate_run is deterministic per seed") {
  auto cfg = small_config(Mode::Noise);
  const auto seq = generate_blinded_sequence(cfg);
  const auto a = simulate_run(cfg, seq);
  const auto b = simulate_run(cfg, seq);
  REQUIRE(a.size() == 3 * 2 * 3);
  bool differs = false;
  cfg.seed = 2;
  const auto c = simulate_run(cfg, seq);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].counts == b[i].counts);
    CHECK(a[i].counts == std::floor(a[i].counts));
    differs = differs || a[i].counts != c[i].counts;
  }
  CHECK(differs);
}

TEST_CASE("simulate_run puts the blinded input first") {
  auto cfg = small_config(Mode::Noise);
  const BlindedSequence seq{{-1, +1, -1}, Provenance::Generated};
  const auto recs = simulate_run(cfg, seq);
  CHECK(recs[0].input == -1);
  CHECK(recs[3].input == +1);
  CHECK(recs[6].input == +1);
  CHECK_THROWS_AS(simulate_run(cfg, BlindedSequence{{1, 1}, Provenance::Generated}),
                  ConfigurationError);
}

TEST_CASE("projective point without sampling") {
  RunConfig cfg = RunConfig::reference_noise();
  cfg.theta_grid = {kPi / 2};
  cfg.poisson = false;
  cfg.background_cps = 0.0;
  cfg.contrast = 1.0;
  const auto recs = simulate_run(cfg, {{+1}, Provenance::Generated});
  for (const auto &r : recs) {
    const double expect = (r.channel.m == r.input) ? 350.0 * 400.0 : 0.0;
    CHECK(r.counts == doctest::Approx(expect).scale(1).epsilon(1e-9));
  }
}

TEST_CASE("structural zero cell collects background only") {
  RunConfig cfg = small_config(Mode::Disturbance);
  cfg.contrast = 1.0;
  cfg.poisson = false;
  const auto recs = simulate_run(cfg, generate_blinded_sequence(cfg));
  for (const auto &r : recs)
    if (r.input == -1 && r.channel.bprime == +1)
      CHECK(r.counts == doctest::Approx(cfg.background_cps * cfg.t_meas_s));
}

TEST_CASE("correct_counts inverts the noiseless forward model") {
  for (Mode mode : {Mode::Noise, Mode::Disturbance}) {
    RunConfig cfg = small_config(mode);
    cfg.poisson = false;
    const auto recs = simulate_run(cfg, generate_blinded_sequence(cfg));
    for (double t : cfg.theta_grid) {
      const auto joint = correct_counts(at_theta(recs, t), cfg);
      CHECK(std::abs(conditional_entropy(joint) - ideal_quantity(mode, t)) <= 1e-12);
      if (mode == Mode::Disturbance) {
        const auto ref = joint_bb(t);
        for (int b : {+1, -1})
          for (int bp : {+1, -1})
            CHECK(std::abs(joint.prob(b, bp) - ref.prob(b, bp)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("correct_counts with ideal apparatus is plain normalization") {
  RunConfig cfg = small_config(Mode::Noise);
  cfg.contrast = 1.0;
  cfg.background_cps = 0.0;
  std::vector<CountRecord> recs;
  const double counts[2][3] = {{10, 20, 70}, {40, 50, 10}};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 3; ++k)
      recs.push_back({0.5, i == 0 ? +1 : -1, {k - 1, std::nullopt}, counts[i][k], 1.0});
  const auto j = correct_counts(recs, cfg);
  CHECK(j.prob(+1, -1) == doctest::Approx(0.05));
  CHECK(j.prob(+1, +1) == doctest::Approx(0.35));
  CHECK(j.prob(-1, 0) == doctest::Approx(0.25));
}

TEST_CASE("correct_counts rejects malformed groups") {
  RunConfig cfg = small_config(Mode::Noise);
  cfg.poisson = false;
  auto recs = at_theta(simulate_run(cfg, generate_blinded_sequence(cfg)), 0.2);
  auto missing = recs;
  missing.pop_back();
  CHECK_THROWS_AS(correct_counts(missing, cfg), ConfigurationError);
  auto dup = recs;
  dup.push_back(recs.front());
  CHECK_THROWS_AS(correct_counts(dup, cfg), ConfigurationError);
  auto empty = recs;
  for (auto &r : empty)
    r.counts = 0.0;
  CHECK_THROWS_AS(correct_counts(empty, cfg), DegenerateData);
}

TEST_CASE("corrected tables are normalized per input") {
  for (Mode mode : {Mode::Noise, Mode::Disturbance}) {
    RunConfig cfg = mode == Mode::Noise ? RunConfig::reference_noise()
                                        : RunConfig::reference_disturbance();
    const auto recs = simulate_run(cfg, generate_blinded_sequence(cfg));
    for (const auto &g : group_by_theta(recs)) {
      const auto j = correct_counts(g, cfg);
      for (double s : j.row_marginal())
        CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("estimate_tradeoff on deterministic counts") {
  RunConfig cfg = small_config(Mode::Noise);
  cfg.poisson = false;
  const auto recs = at_theta(simulate_run(cfg, generate_blinded_sequence(cfg)), kPi / 3);
  const auto est = estimate_tradeoff(correct_counts(recs, cfg), recs, cfg, 1);
  CHECK(est.value == doctest::Approx(0.56971926844351326).epsilon(1e-12));
  CHECK(est.sigma_stat > 0.0);
  CHECK(est.sigma_stat < 0.05);
  CHECK(est.sigma_sys == 0.0);

  cfg.sys_angle_rad = 0.01;
  const auto sys = estimate_tradeoff(correct_counts(recs, cfg), recs, cfg, 1);
  const double expect =
      0.5 * std::abs(closed_form_noise(kPi / 3 + 0.01) - closed_form_noise(kPi / 3 - 0.01));
  CHECK(sys.sigma_sys == doctest::Approx(expect));
}

TEST_CASE("bootstrap spread vanishes for a perfectly correlated table") {
  RunConfig cfg = small_config(Mode::Noise);
  cfg.contrast = 1.0;
  cfg.background_cps = 0.0;
  std::vector<CountRecord> recs;
  for (int input : {+1, -1})
    for (int m : {-1, 0, +1})
      recs.push_back({kPi / 2, input, {m, std::nullopt}, m == input ? 5000.0 : 0.0, 1.0});
  const auto est = estimate_tradeoff(correct_counts(recs, cfg), recs, cfg, 0);
  CHECK(est.value == 0.0);
  CHECK(est.sigma_stat == 0.0);
}

TEST_CASE("analyze_records follows the grid") {
  RunConfig cfg = small_config(Mode::Disturbance);
  const auto recs = simulate_run(cfg, generate_blinded_sequence(cfg));
  const auto pts = analyze_records(recs, cfg);
  REQUIRE(pts.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(pts[i].theta == cfg.theta_grid[i]);
    CHECK(std::isfinite(pts[i].estimate.value));
    CHECK(std::abs(pts[i].estimate.value - ideal_quantity(cfg.mode, pts[i].theta)) <
          6.0 * pts[i].estimate.sigma_stat + 1e-9);
  }
}

TEST_CASE("disturbance estimates near theta = 0 are biased upward") {
  // The entropy of a nearly deterministic table is pushed up by count noise.
  RunConfig cfg = RunConfig::reference_disturbance();
  cfg.theta_grid = {kPi / 34};
  double mean = 0.0;
  const int runs = 20;
  for (int s = 1; s <= runs; ++s) {
    cfg.seed = static_cast<std::uint64_t>(s);
    const auto pts = analyze_records(simulate_run(cfg, generate_blinded_sequence(cfg)), cfg);
    mean += pts[0].estimate.value / runs;
  }
  CHECK(mean > closed_form_disturbance(kPi / 34));
}

TEST_CASE("systematic offset is bounded and seeded") {
  RunConfig cfg = RunConfig::reference_noise();
  CHECK(systematic_offset(cfg) == 0.0);
  cfg.sys_angle_rad = 0.02;
  for (std::uint64_t s = 1; s < 50; ++s) {
    cfg.seed = s;
    const double o = systematic_offset(cfg);
    CHECK(std::abs(o) <= 0.02);
    CHECK(o == systematic_offset(cfg));
  }
}
