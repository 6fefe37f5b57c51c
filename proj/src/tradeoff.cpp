// SPDX-License-Identifier: Apache-2.0
#include "emur/tradeoff.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "emur/errors.hpp"

namespace emur {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double checked_theta(double theta) {
  if (!(theta >= -1e-12 && theta <= kHalfPi + 1e-12))
    throw DomainError("theta = " + std::to_string(theta) + " outside [0, pi/2]");
  return std::clamp(theta, 0.0, kHalfPi);
}

std::vector<int> observable_labels(const Observable &o) {
  return {o.eigenstates()[0].label, o.eigenstates()[1].label};
}

void require_matching_labels(const QuantumInstrument &inst,
                             const CorrectionMap &corr) {
  auto labels = inst.labels();
  std::sort(labels.begin(), labels.end());
  if (labels != corr.labels())
    throw ConfigurationError("instrument and correction outcome labels differ");
}

} // namespace

std::vector<double> quarter_grid(int steps) {
  if (steps < 1)
    throw ConfigurationError("theta grid needs at least one step");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k < steps; ++k)
    grid.push_back(kHalfPi * k / steps);
  grid.push_back(kHalfPi);
  return grid;
}

LabeledJointDistribution noise_joint(const QuantumInstrument &inst,
                                     const Observable &a) {
  const auto m_labels = inst.labels();
  std::vector<double> table;
  for (const auto &ea : a.eigenstates()) {
    const QubitState rho(ea.projector);
    for (int m : m_labels)
      table.push_back(0.5 * born_probability(inst.induced_effect(m), rho));
  }
  return LabeledJointDistribution(observable_labels(a), m_labels, std::move(table));
}

LabeledJointDistribution disturbance_joint(const QuantumInstrument &inst,
                                           const CorrectionMap &corr,
                                           const Observable &b) {
  require_matching_labels(inst, corr);
  std::vector<double> table;
  for (const auto &eb : b.eigenstates()) {
    QubitOperator out;
    for (int m : inst.labels())
      out += corr.apply(m, inst.apply_branch(m, eb.projector));
    for (const auto &eb2 : b.eigenstates())
      table.push_back(
          std::clamp(0.5 * (out * eb2.projector).trace().real(), 0.0, 1.0));
  }
  return LabeledJointDistribution(observable_labels(b), observable_labels(b),
                                  std::move(table));
}

double noise(const QuantumInstrument &inst, const Observable &a) {
  return conditional_entropy(noise_joint(inst, a));
}

double disturbance(const QuantumInstrument &inst, const CorrectionMap &corr,
                   const Observable &b) {
  return conditional_entropy(disturbance_joint(inst, corr, b));
}

double closed_form_noise(double theta) {
  theta = checked_theta(theta);
  const double c = std::cos(theta);
  return (c + binary_h(std::sin(theta))) / (1.0 + c);
}

double closed_form_disturbance(double theta) {
  theta = checked_theta(theta);
  const double c = std::cos(theta);
  return binary_h(std::clamp(c, 0.0, 1.0)) / (1.0 + c);
}

LabeledJointDistribution joint_bb(double theta) {
  theta = checked_theta(theta);
  const double c = theta == kHalfPi ? 0.0 : std::cos(theta);
  const std::array<int, 2> labels{+1, -1};
  std::vector<double> table;
  for (int b : labels)
    for (int bp : labels)
      table.push_back((1.0 - bp + (1.0 + bp + 2.0 * b * bp) * c) /
                      (4.0 * (1.0 + c)));
  return LabeledJointDistribution({+1, -1}, {+1, -1}, std::move(table));
}

double buscemi_bound(const Observable &a, const Observable &b) {
  const double c = max_overlap(a, b);
  return std::max(0.0, -std::log2(c * c));
}

PreparationBounds preparation_bounds(const Observable &a, const Observable &b) {
  const double c = max_overlap(a, b);
  return {std::max(0.0, -2.0 * std::log2(0.5 * (1.0 + c))),
          std::max(0.0, -2.0 * std::log2(c))};
}

double projective_lhs(double noise_bits, double disturbance_bits) {
  const double gn = inverse_g(noise_bits);
  const double gd = inverse_g(disturbance_bits);
  return gn * gn + gd * gd;
}

namespace {

TradeoffPoint make_point(double theta, double n, double d, double closed_n,
                         double closed_d, double bound) {
  TradeoffPoint p;
  p.theta = theta;
  p.noise = std::clamp(n, 0.0, 1.0);
  p.disturbance = std::clamp(d, 0.0, 1.0);
  p.g_sum = projective_lhs(p.noise, p.disturbance);
  p.buscemi_lhs = n + d;
  p.closed_noise = closed_n;
  p.closed_disturbance = closed_d;
  p.violates_projective_bound = p.g_sum > 1.0 + kViolationMargin;
  p.satisfies_buscemi = p.buscemi_lhs >= bound - kBoundSlack;
  return p;
}

} // namespace

Frontier scan_frontier(const std::vector<double> &theta_grid) {
  const Observable a = Observable::sigma_z();
  const Observable b = Observable::sigma_x();
  const double bound = buscemi_bound(a, b);

  Frontier f;
  f.povm.reserve(theta_grid.size());
  f.projective.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    theta = checked_theta(theta);
    const QuantumInstrument inst = luders_instrument(three_outcome_povm(theta));
    f.povm.push_back(make_point(theta, noise(inst, a),
                                disturbance(inst, optimal_correction(theta), b),
                                closed_form_noise(theta),
                                closed_form_disturbance(theta), bound));

    const ProjectiveReference ref = projective_reference(theta);
    const QuantumInstrument proj = luders_instrument(ref.povm);
    f.projective.push_back(make_point(
        theta, noise(proj, a), disturbance(proj, ref.correction, b),
        binary_h(std::clamp(std::cos(theta), 0.0, 1.0)),
        binary_h(std::clamp(std::sin(theta), 0.0, 1.0)), bound));
  }
  return f;
}

CorrectionSearchResult optimize_correction(const QuantumInstrument &inst,
                                           const Observable &b,
                                           double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= std::numbers::pi / 8.0))
    throw ConfigurationError("correction search grid step must lie in (0, pi/8]");

  const auto labels = inst.labels();
  const std::size_t n_out = labels.size();
  const auto &eig = b.eigenstates();

  // post[m][i] = K_m P_{b_i} K_m^dagger, unnormalized.
  std::vector<std::array<QubitOperator, 2>> post(n_out);
  for (std::size_t m = 0; m < n_out; ++m)
    for (std::size_t i = 0; i < 2; ++i)
      post[m][i] = inst.apply_branch(labels[m], eig[i].projector);

  // Contribution of outcome m to p(b_i, b'_j) for one channel choice.
  using Block = std::array<double, 4>;
  auto block_for = [&](std::size_t m, const ChannelDescriptor &ch) {
    Block blk{};
    for (std::size_t i = 0; i < 2; ++i) {
      const QubitOperator out = apply_channel(ch, post[m][i]);
      for (std::size_t j = 0; j < 2; ++j)
        blk[2 * i + j] = 0.5 * (out * eig[j].projector).trace().real();
    }
    return blk;
  };

  std::size_t n_assign = 1;
  for (std::size_t m = 0; m < n_out; ++m)
    n_assign *= 3;

  auto evaluate = [&](const std::vector<std::array<Block, 3>> &blocks,
                      std::size_t code) {
    Block sum{};
    for (std::size_t m = 0; m < n_out; ++m, code /= 3)
      for (std::size_t k = 0; k < 4; ++k)
        sum[k] += blocks[m][code % 3][k];
    for (double &v : sum)
      v = std::max(v, 0.0);
    return conditional_entropy(LabeledJointDistribution(
        {eig[0].label, eig[1].label}, {eig[0].label, eig[1].label},
        {sum.begin(), sum.end()}));
  };

  // Option index per outcome: 0 identity, 1 prepare +t, 2 prepare -t.
  std::vector<std::size_t> best_code(n_out, 0);
  BlochVector best_t = BlochVector::unit_x();
  double best = disturbance(inst, CorrectionMap::identity(labels), b);

  std::vector<std::array<Block, 3>> blocks(n_out);
  for (std::size_t m = 0; m < n_out; ++m)
    blocks[m][0] = block_for(m, IdentityChannel{});

  for (std::size_t k = 0; k * grid_step < std::numbers::pi; ++k) {
    // Polar angle from +z towards +x; k = 0 is the +x direction.
    const double beta = kHalfPi + static_cast<double>(k) * grid_step;
    const BlochVector t{std::sin(beta), 0.0, std::cos(beta)};
    for (std::size_t m = 0; m < n_out; ++m) {
      blocks[m][1] = block_for(m, PreparationChannel{t});
      blocks[m][2] = block_for(m, PreparationChannel{-t});
    }
    for (std::size_t code = 0; code < n_assign; ++code) {
      const double d = evaluate(blocks, code);
      if (d < best) {
        best = d;
        best_t = t;
        std::size_t c = code;
        for (std::size_t m = 0; m < n_out; ++m, c /= 3)
          best_code[m] = c % 3;
      }
    }
  }

  std::map<int, ChannelDescriptor> channels;
  for (std::size_t m = 0; m < n_out; ++m) {
    switch (best_code[m]) {
    case 0:
      channels.emplace(labels[m], IdentityChannel{});
      break;
    case 1:
      channels.emplace(labels[m], PreparationChannel{best_t});
      break;
    default:
      channels.emplace(labels[m], PreparationChannel{-best_t});
      break;
    }
  }
  return {CorrectionMap(std::move(channels)), best};
}

} // namespace emur
