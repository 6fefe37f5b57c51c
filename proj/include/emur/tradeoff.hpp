// SPDX-License-Identifier: Apache-2.0
//
// Information-theoretic noise and disturbance of qubit instruments, the
// entropic bounds they are compared against, and frontier scans.
#pragma once

#include <vector>

#include "emur/entropy.hpp"
#include "emur/instrument.hpp"

namespace emur {

// g_sum above 1 + this margin counts as a violation of the projective relation.
inline constexpr double kViolationMargin = 1e-6;
// N + D may fall short of the bound by this much and still satisfy it.
inline constexpr double kBoundSlack = 1e-9;

// Grid 0, step, ..., pi/2 with `steps` intervals (steps = 17 is the default).
std::vector<double> quarter_grid(int steps = 17);

// Joint p(a, m) = Tr[E_m |a><a|] / 2 over uniformly drawn eigenstates of A.
LabeledJointDistribution noise_joint(const QuantumInstrument &inst,
                                     const Observable &a);
// Joint p(b, b') after the instrument, the correction and a final B measurement.
LabeledJointDistribution disturbance_joint(const QuantumInstrument &inst,
                                           const CorrectionMap &corr,
                                           const Observable &b);

// H(A | M) in bits.
double noise(const QuantumInstrument &inst, const Observable &a);
// H(B | B') in bits.
double disturbance(const QuantumInstrument &inst, const CorrectionMap &corr,
                   const Observable &b);

// (cos t + h(sin t)) / (1 + cos t)
double closed_form_noise(double theta);
// h(cos t) / (1 + cos t)
double closed_form_disturbance(double theta);

// Closed-form p(b, b') for the three-outcome family with optimal correction.
// Rows are b, columns b', both ordered {+1, -1}.
LabeledJointDistribution joint_bb(double theta);

// -log2 c^2 with c the maximal eigenvector overlap.
double buscemi_bound(const Observable &a, const Observable &b);

struct PreparationBounds {
  double deutsch = 0.0;
  double maassen_uffink = 0.0;
};
PreparationBounds preparation_bounds(const Observable &a, const Observable &b);

// g[N]^2 + g[D]^2; at most 1 for projective measurements.
double projective_lhs(double noise_bits, double disturbance_bits);

struct TradeoffPoint {
  double theta = 0.0;
  double noise = 0.0;
  double disturbance = 0.0;
  double g_sum = 0.0;
  double buscemi_lhs = 0.0;
  double closed_noise = 0.0;
  double closed_disturbance = 0.0;
  bool violates_projective_bound = false;
  bool satisfies_buscemi = false;
};

struct Frontier {
  // Three-outcome family with optimal correction, computed by brute force.
  std::vector<TradeoffPoint> povm;
  // Projective reference at alpha = theta; closed fields hold h(cos), h(sin).
  std::vector<TradeoffPoint> projective;
};

// Evaluates both curves for sigma_z noise and sigma_x disturbance.
Frontier scan_frontier(const std::vector<double> &theta_grid);

struct CorrectionSearchResult {
  CorrectionMap correction;
  double disturbance = 0.0;
};

// Exhaustive search over correction maps built from one grid direction t on
// the x-z great circle: every outcome is assigned +t, -t or the identity. The
// grid starts at +x so both x-axis targets are always candidates.
CorrectionSearchResult optimize_correction(const QuantumInstrument &inst,
                                           const Observable &b,
                                           double grid_step);

} // namespace emur
