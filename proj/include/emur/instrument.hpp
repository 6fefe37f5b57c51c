// SPDX-License-Identifier: Apache-2.0
//
// Measurement devices: POVMs, quantum instruments given by Kraus operators,
// and outcome-conditioned correction channels.
#pragma once

#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "emur/qubit.hpp"

namespace emur {

// Effect weight * (1 + direction . sigma) attached to an outcome label.
struct PovmElement {
  int label = 0;
  double weight = 0.0;
  BlochVector direction;
  QubitOperator effect;

  static PovmElement from_bloch(int label, double weight, const BlochVector &n);
  // Derives weight and direction from an arbitrary Hermitian effect.
  static PovmElement from_effect(int label, const QubitOperator &effect);
};

class Povm {
public:
  // Checks positivity, effect <= 1, unique labels and completeness (1e-10).
  explicit Povm(std::vector<PovmElement> elements);

  const std::vector<PovmElement> &elements() const { return elements_; }
  const PovmElement &element(int label) const;
  std::vector<int> labels() const;

private:
  std::vector<PovmElement> elements_;
};

class QuantumInstrument {
public:
  struct Branch {
    int label = 0;
    std::vector<QubitOperator> kraus;
  };

  // Throws ConfigurationError unless sum of K^dagger K is the identity.
  explicit QuantumInstrument(std::vector<Branch> branches);
  // As above, and the induced POVM must match `declared` within 1e-10.
  QuantumInstrument(std::vector<Branch> branches, const Povm &declared);

  const std::vector<Branch> &branches() const { return branches_; }
  std::vector<int> labels() const;

  // Sum over Kraus operators of K^dagger K for one outcome.
  QubitOperator induced_effect(int label) const;
  // Unnormalized post-measurement operator for one outcome.
  QubitOperator apply_branch(int label, const QubitOperator &rho) const;

private:
  const Branch &branch(int label) const;

  std::vector<Branch> branches_;
};

struct IdentityChannel {};

// rho -> U rho U^dagger with U = exp(-i angle/2 axis . sigma).
struct RotationChannel {
  BlochVector axis;
  double angle = 0.0;
};

// rho -> Tr[rho] P(target).
struct PreparationChannel {
  BlochVector target;
};

using ChannelDescriptor =
    std::variant<IdentityChannel, RotationChannel, PreparationChannel>;

// Trace-preserving action of a descriptor on an (unnormalized) operator.
QubitOperator apply_channel(const ChannelDescriptor &channel,
                            const QubitOperator &rho);

class CorrectionMap {
public:
  CorrectionMap() = default;
  explicit CorrectionMap(std::map<int, ChannelDescriptor> channels);

  static CorrectionMap identity(const std::vector<int> &labels);

  const std::map<int, ChannelDescriptor> &channels() const { return channels_; }
  const ChannelDescriptor &channel(int label) const;
  std::vector<int> labels() const;
  QubitOperator apply(int label, const QubitOperator &rho) const {
    return apply_channel(channel(label), rho);
  }

private:
  std::map<int, ChannelDescriptor> channels_;
};

// Three-outcome family with labels -1, 0, +1 for theta in [0, pi/2].
Povm three_outcome_povm(double theta);

// Square-root instrument for weighted rank-one effects: K_m = sqrt(2 p_m) P(n_m).
// Zero-weight elements get an empty Kraus list.
QuantumInstrument luders_instrument(const Povm &povm);

// Outcomes +-1 prepare -x, outcome 0 prepares +x.
CorrectionMap optimal_correction(double theta);

// Rotations about y taking each n_m of three_outcome_povm(theta) onto the
// x-axis target used by optimal_correction. Equal statistics on P(n_m).
CorrectionMap optimal_rotation_correction(double theta);

struct ProjectiveReference {
  Povm povm;
  CorrectionMap correction;
};

// Two-outcome projective measurement along (sin a, 0, cos a); outcome +1 is
// corrected to +x and outcome -1 to -x.
ProjectiveReference projective_reference(double alpha);

struct InstrumentOutcome {
  int label = 0;
  double probability = 0.0;
  // Empty when the outcome has zero probability.
  std::optional<QubitState> post_state;
};

std::vector<InstrumentOutcome> apply_instrument(const QuantumInstrument &inst,
                                                const CorrectionMap &corr,
                                                const QubitState &state);

} // namespace emur
