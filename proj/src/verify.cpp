// SPDX-License-Identifier: Apache-2.0
#include "emur/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "emur/errors.hpp"
#include "emur/instrument.hpp"
#include "emur/tradeoff.hpp"

namespace emur {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Runs `body`, which returns an empty string on success or a failure detail.
CheckResult check(const std::string &name, const std::function<std::string()> &body) {
  try {
    const std::string detail = body();
    return {name, detail.empty(), detail};
  } catch (const std::exception &e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

std::string worst(const char *what, double value, double theta) {
  return std::string(what) + " " + fmt(value) + " at theta " + fmt(theta);
}

bool interior(double theta) {
  return theta > 1e-12 && theta < std::numbers::pi / 2.0 - 1e-12;
}

} // namespace

Coverage monte_carlo_coverage(RunConfig base, std::uint64_t first_seed, int seeds) {
  Coverage cov;
  for (int s = 0; s < seeds; ++s) {
    base.seed = first_seed + static_cast<std::uint64_t>(s);
    const auto records = simulate_run(base, generate_blinded_sequence(base));
    for (const auto &p : analyze_records(records, base)) {
      const double truth = ideal_quantity(base.mode, p.theta);
      ++cov.total;
      if (std::abs(p.estimate.value - truth) <= 3.0 * p.estimate.sigma_stat + 1e-12)
        ++cov.within;
    }
  }
  return cov;
}

std::vector<CheckResult> run_invariant_suite(const VerifyConfig &config) {
  const std::vector<double> grid = config.grid.empty() ? quarter_grid(17) : config.grid;
  for (double t : grid)
    if (!(t >= 0.0 && t <= std::numbers::pi / 2.0))
      throw ConfigurationError("theta grid value " + std::to_string(t) +
                               " outside [0, pi/2]");
  const double tol = config.tolerance;
  const Observable sx = Observable::sigma_x();
  std::vector<CheckResult> out;

  out.push_back(check("projective saturation g[h(cos a)]^2 + g[h(sin a)]^2 = 1", [&] {
    for (double a : grid) {
      const double lhs = projective_lhs(binary_h(std::cos(a)),
                                        binary_h(std::clamp(std::sin(a), 0.0, 1.0)));
      if (std::abs(lhs - 1.0) > 1e-6)
        return worst("sum", lhs, a);
    }
    return std::string();
  }));
  if (config.projective_only)
    return out;

  out.push_back(check("binary entropy strictly decreasing, g(h(x)) = x", [&] {
    double prev = 2.0;
    for (int i = 0; i <= 1000; ++i) {
      const double x = i * 1e-3;
      const double h = binary_h(x);
      if (!(h < prev))
        return worst("h not decreasing", h, x);
      prev = h;
      if (std::abs(inverse_g(h) - x) > 1e-10)
        return worst("round trip error", std::abs(inverse_g(h) - x), x);
    }
    return std::string();
  }));

  out.push_back(check("POVM completeness in Bloch form", [&] {
    for (double t : grid) {
      const Povm povm = three_outcome_povm(t);
      double w = 0.0;
      BlochVector v;
      for (const auto &e : povm.elements()) {
        w += e.weight;
        v = v + e.direction * e.weight;
      }
      if (std::abs(w - 1.0) > 1e-10 || v.norm() > 1e-10)
        return worst("completeness defect", std::max(std::abs(w - 1.0), v.norm()), t);
    }
    return std::string();
  }));

  out.push_back(check("Lueders instrument trace preserving on random states", [&] {
    std::mt19937_64 rng(20240617);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit;
    for (double t : grid) {
      const QuantumInstrument inst = luders_instrument(three_outcome_povm(t));
      const CorrectionMap corr = optimal_correction(t);
      for (int i = 0; i < 1000 / static_cast<int>(grid.size()) + 1; ++i) {
        BlochVector r{gauss(rng), gauss(rng), gauss(rng)};
        r = r * (std::cbrt(unit(rng)) / r.norm());
        double total = 0.0;
        for (const auto &o : apply_instrument(inst, corr, QubitState::from_bloch(r)))
          total += o.probability;
        if (std::abs(total - 1.0) > 1e-10)
          return worst("total probability", total, t);
      }
    }
    return std::string();
  }));

  out.push_back(check("degenerate endpoints of the three-outcome family", [&] {
    const Povm proj = three_outcome_povm(std::numbers::pi / 2.0);
    if (proj.element(+1).effect.distance(projector_from_direction(BlochVector::unit_z())) > 1e-12 ||
        proj.element(-1).effect.distance(projector_from_direction(-BlochVector::unit_z())) > 1e-12 ||
        proj.element(0).effect.distance(QubitOperator::zero()) > 1e-12)
      return std::string("theta = pi/2 is not the sigma_z measurement");
    const Povm flat = three_outcome_povm(0.0);
    if (flat.element(0).effect.distance(projector_from_direction(BlochVector::unit_x())) > 1e-12)
      return std::string("theta = 0 element 0 is not |+x><+x|");
    return std::string();
  }));

  const Frontier frontier = scan_frontier(grid);

  out.push_back(check("brute-force noise/disturbance equal closed forms", [&] {
    for (const auto &p : frontier.povm) {
      if (std::abs(p.noise - p.closed_noise) > tol)
        return worst("noise deviation", p.noise - p.closed_noise, p.theta);
      if (std::abs(p.disturbance - p.closed_disturbance) > tol)
        return worst("disturbance deviation", p.disturbance - p.closed_disturbance,
                     p.theta);
    }
    return std::string();
  }));

  out.push_back(check("p(b,b') matches brute force, zero cell exact", [&] {
    for (double t : grid) {
      const auto closed = joint_bb(t);
      if (closed.prob(-1, +1) != 0.0)
        return worst("p(-1,+1)", closed.prob(-1, +1), t);
      const auto brute = disturbance_joint(luders_instrument(three_outcome_povm(t)),
                                           optimal_correction(t), sx);
      for (int b : {+1, -1})
        for (int bp : {+1, -1})
          if (std::abs(brute.prob(b, bp) - closed.prob(b, bp)) > 1e-12)
            return worst("joint mismatch", brute.prob(b, bp) - closed.prob(b, bp), t);
      const auto marg = closed.col_marginal();
      const double c = std::cos(t);
      for (std::size_t j = 0; j < 2; ++j) {
        const double bp = closed.col_labels()[j];
        const double expect = (1.0 - bp + c + bp * c) / (2.0 + 2.0 * c);
        if (std::abs(marg[j] - expect) > 1e-12)
          return worst("marginal mismatch", marg[j] - expect, t);
      }
    }
    return std::string();
  }));

  out.push_back(check("N + D >= -log2 c^2 (sigma_z, sigma_x)", [&] {
    for (const auto &p : frontier.povm)
      if (!p.satisfies_buscemi)
        return worst("N + D", p.buscemi_lhs, p.theta);
    return std::string();
  }));

  out.push_back(check("g[N]^2 + g[D]^2 > 1 at interior points", [&] {
    for (const auto &p : frontier.povm)
      if (interior(p.theta) && !p.violates_projective_bound)
        return worst("g_sum", p.g_sum, p.theta);
    return std::string();
  }));

  out.push_back(check("projective reference brute force equals h(cos a), h(sin a)", [&] {
    for (const auto &p : frontier.projective)
      if (std::abs(p.noise - p.closed_noise) > tol ||
          std::abs(p.disturbance - p.closed_disturbance) > tol)
        return worst("deviation", std::max(std::abs(p.noise - p.closed_noise),
                                           std::abs(p.disturbance - p.closed_disturbance)),
                     p.theta);
    return std::string();
  }));

  out.push_back(check("optimal correction is not beaten by exhaustive search", [&] {
    for (double t : grid) {
      const auto best = optimize_correction(luders_instrument(three_outcome_povm(t)), sx,
                                            config.correction_step);
      if (best.disturbance < closed_form_disturbance(t) - 1e-6)
        return worst("search found", best.disturbance, t);
    }
    return std::string();
  }));

  out.push_back(check("noiseless simulate -> correct -> estimate reproduces N and D", [&] {
    for (Mode mode : {Mode::Noise, Mode::Disturbance}) {
      RunConfig cfg = mode == Mode::Noise ? RunConfig::reference_noise()
                                          : RunConfig::reference_disturbance();
      cfg.theta_grid = grid;
      cfg.poisson = false;
      const auto records = simulate_run(cfg, generate_blinded_sequence(cfg));
      for (const auto &g : group_by_theta(records)) {
        const double v = conditional_entropy(correct_counts(g, cfg));
        const double truth = mode == Mode::Noise ? closed_form_noise(g.front().theta)
                                                 : closed_form_disturbance(g.front().theta);
        if (std::abs(v - truth) > tol)
          return worst((to_string(mode) + " deviation").c_str(), v - truth,
                       g.front().theta);
      }
    }
    return std::string();
  }));

  out.push_back(check("corrected tables are normalized per input", [&] {
    for (Mode mode : {Mode::Noise, Mode::Disturbance}) {
      RunConfig cfg = mode == Mode::Noise ? RunConfig::reference_noise()
                                          : RunConfig::reference_disturbance();
      cfg.theta_grid = grid;
      const auto records = simulate_run(cfg, generate_blinded_sequence(cfg));
      for (const auto &g : group_by_theta(records)) {
        const auto joint = correct_counts(g, cfg);
        for (double rowsum : joint.row_marginal())
          if (std::abs(2.0 * rowsum - 1.0) > 1e-9)
            return worst("per-input sum", 2.0 * rowsum, g.front().theta);
        for (std::size_t r = 0; r < joint.rows(); ++r)
          for (std::size_t c = 0; c < joint.cols(); ++c)
            if (joint.at(r, c) < 0.0 || joint.at(r, c) > 1.0)
              return worst("probability", joint.at(r, c), g.front().theta);
      }
    }
    return std::string();
  }));

  if (config.mc_seeds > 0) {
    out.push_back(check("Monte Carlo estimates cover the ideal values (3 sigma)", [&] {
      Coverage total;
      for (const RunConfig &base :
           {RunConfig::reference_noise(), RunConfig::reference_disturbance(400.0),
            RunConfig::reference_disturbance(800.0)}) {
        RunConfig cfg = base;
        cfg.theta_grid = grid;
        const Coverage c = monte_carlo_coverage(cfg, 1, config.mc_seeds);
        total.within += c.within;
        total.total += c.total;
      }
      if (total.fraction() < 0.95)
        return "coverage " + fmt(total.fraction());
      return std::string();
    }));
  }
  return out;
}

} // namespace emur
