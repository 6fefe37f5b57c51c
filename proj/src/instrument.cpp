// SPDX-License-Identifier: Apache-2.0
#include "emur/instrument.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "emur/errors.hpp"

namespace emur {

namespace {

constexpr double kCompletenessTol = 1e-10;
constexpr double kZeroWeight = 1e-15;
constexpr double kAngleTol = 1e-12;

// Accepts angles in [0, pi/2] up to rounding of grid arithmetic.
double checked_quarter_angle(double angle, const char *name) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(angle >= -kAngleTol && angle <= half_pi + kAngleTol))
    throw DomainError(std::string(name) + " = " + std::to_string(angle) +
                      " outside [0, pi/2]");
  return std::clamp(angle, 0.0, half_pi);
}

// cos and sin with exact values at the interval ends.
std::pair<double, double> cos_sin(double angle) {
  if (angle == 0.0)
    return {1.0, 0.0};
  if (angle == std::numbers::pi / 2.0)
    return {0.0, 1.0};
  return {std::cos(angle), std::sin(angle)};
}

template <class T>
std::vector<int> labels_of(const std::vector<T> &items) {
  std::vector<int> out;
  out.reserve(items.size());
  for (const auto &it : items)
    out.push_back(it.label);
  return out;
}

void require_unique(const std::vector<int> &labels) {
  if (std::set<int>(labels.begin(), labels.end()).size() != labels.size())
    throw ConfigurationError("duplicate outcome label");
}

// Polar angle of a vector in the x-z plane, measured from +z towards +x.
double xz_angle(const BlochVector &v) { return std::atan2(v.x, v.z); }

} // namespace

PovmElement PovmElement::from_bloch(int label, double weight,
                                    const BlochVector &n) {
  return {label, weight, n, QubitOperator::from_bloch(weight, n)};
}

PovmElement PovmElement::from_effect(int label, const QubitOperator &effect) {
  const BlochForm b = effect.bloch();
  if (std::abs(b.weight) <= kZeroWeight)
    return {label, 0.0, {}, effect};
  return {label, b.weight, b.direction, effect};
}

Povm::Povm(std::vector<PovmElement> elements) : elements_(std::move(elements)) {
  if (elements_.empty())
    throw ConfigurationError("POVM has no elements");
  require_unique(labels_of(elements_));
  QubitOperator total;
  for (const auto &e : elements_) {
    if (!e.effect.is_hermitian(kCompletenessTol))
      throw InvalidEffect("POVM element " + std::to_string(e.label) +
                          " is not Hermitian");
    const auto ev = e.effect.hermitian_eigenvalues();
    if (ev[0] < -kCompletenessTol || ev[1] > 1.0 + kCompletenessTol)
      throw InvalidEffect("POVM element " + std::to_string(e.label) +
                          " has eigenvalues outside [0, 1]");
    total += e.effect;
  }
  if (total.distance(QubitOperator::identity()) > kCompletenessTol)
    throw ConfigurationError("POVM elements do not sum to the identity");
}

const PovmElement &Povm::element(int label) const {
  for (const auto &e : elements_)
    if (e.label == label)
      return e;
  throw ConfigurationError("POVM has no outcome " + std::to_string(label));
}

std::vector<int> Povm::labels() const { return labels_of(elements_); }

QuantumInstrument::QuantumInstrument(std::vector<Branch> branches)
    : branches_(std::move(branches)) {
  if (branches_.empty())
    throw ConfigurationError("instrument has no outcomes");
  require_unique(labels());
  QubitOperator total;
  for (const auto &b : branches_)
    total += induced_effect(b.label);
  if (total.distance(QubitOperator::identity()) > kCompletenessTol)
    throw ConfigurationError("instrument is not trace preserving");
}

QuantumInstrument::QuantumInstrument(std::vector<Branch> branches,
                                     const Povm &declared)
    : QuantumInstrument(std::move(branches)) {
  for (const auto &e : declared.elements())
    if (induced_effect(e.label).distance(e.effect) > kCompletenessTol)
      throw ConfigurationError("instrument outcome " + std::to_string(e.label) +
                               " does not induce the declared effect");
  if (declared.elements().size() != branches_.size())
    throw ConfigurationError("instrument and POVM outcome counts differ");
}

std::vector<int> QuantumInstrument::labels() const { return labels_of(branches_); }

const QuantumInstrument::Branch &QuantumInstrument::branch(int label) const {
  for (const auto &b : branches_)
    if (b.label == label)
      return b;
  throw ConfigurationError("instrument has no outcome " + std::to_string(label));
}

QubitOperator QuantumInstrument::induced_effect(int label) const {
  QubitOperator e;
  for (const auto &k : branch(label).kraus)
    e += k.adjoint() * k;
  return e;
}

QubitOperator QuantumInstrument::apply_branch(int label,
                                              const QubitOperator &rho) const {
  QubitOperator out;
  for (const auto &k : branch(label).kraus)
    out += k * rho * k.adjoint();
  return out;
}

QubitOperator apply_channel(const ChannelDescriptor &channel,
                            const QubitOperator &rho) {
  return std::visit(
      [&](const auto &c) -> QubitOperator {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, IdentityChannel>) {
          return rho;
        } else if constexpr (std::is_same_v<T, RotationChannel>) {
          const double len = c.axis.norm();
          if (len == 0.0)
            throw InvalidDirection("rotation axis is the zero vector");
          const BlochVector n = c.axis * (1.0 / len);
          const QubitOperator u =
              QubitOperator::identity() * std::cos(0.5 * c.angle) +
              QubitOperator::from_pauli(0.0, n) * cplx(0.0, -std::sin(0.5 * c.angle));
          return u * rho * u.adjoint();
        } else {
          return projector_from_direction(c.target) * rho.trace();
        }
      },
      channel);
}

CorrectionMap::CorrectionMap(std::map<int, ChannelDescriptor> channels)
    : channels_(std::move(channels)) {
  // Trace preservation on a state basis: |+z>, |-z>, |+x>, |+y>.
  const QubitOperator basis[] = {
      projector_from_direction(BlochVector::unit_z()),
      projector_from_direction(-BlochVector::unit_z()),
      projector_from_direction(BlochVector::unit_x()),
      projector_from_direction(BlochVector::unit_y())};
  for (const auto &[label, ch] : channels_)
    for (const auto &rho : basis)
      if (std::abs(apply_channel(ch, rho).trace() - rho.trace()) > 1e-12)
        throw ConfigurationError("correction for outcome " + std::to_string(label) +
                                 " is not trace preserving");
}

CorrectionMap CorrectionMap::identity(const std::vector<int> &labels) {
  std::map<int, ChannelDescriptor> ch;
  for (int l : labels)
    ch.emplace(l, IdentityChannel{});
  return CorrectionMap(std::move(ch));
}

const ChannelDescriptor &CorrectionMap::channel(int label) const {
  const auto it = channels_.find(label);
  if (it == channels_.end())
    throw ConfigurationError("correction has no outcome " + std::to_string(label));
  return it->second;
}

std::vector<int> CorrectionMap::labels() const {
  std::vector<int> out;
  for (const auto &kv : channels_)
    out.push_back(kv.first);
  return out;
}

Povm three_outcome_povm(double theta) {
  theta = checked_quarter_angle(theta, "theta");
  const auto [c, s] = cos_sin(theta);
  const double p0 = c / (1.0 + c);
  const double p1 = 1.0 / (2.0 * (1.0 + c));
  // n_m = ((-1)^m cos(m theta), 0, sin(m theta))
  return Povm({PovmElement::from_bloch(-1, p1, {-c, 0.0, -s}),
               PovmElement::from_bloch(0, p0, {1.0, 0.0, 0.0}),
               PovmElement::from_bloch(+1, p1, {-c, 0.0, s})});
}

QuantumInstrument luders_instrument(const Povm &povm) {
  std::vector<QuantumInstrument::Branch> branches;
  for (const auto &e : povm.elements()) {
    if (e.weight <= kZeroWeight) {
      branches.push_back({e.label, {}});
      continue;
    }
    if (std::abs(e.direction.norm() - 1.0) > 1e-9)
      throw UnsupportedInstrument("POVM element " + std::to_string(e.label) +
                                  " is not a weighted rank-one effect");
    branches.push_back(
        {e.label, {projector_from_direction(e.direction) * std::sqrt(2.0 * e.weight)}});
  }
  return QuantumInstrument(std::move(branches), povm);
}

CorrectionMap optimal_correction(double theta) {
  checked_quarter_angle(theta, "theta");
  const BlochVector x = BlochVector::unit_x();
  return CorrectionMap({{-1, PreparationChannel{-x}},
                        {0, PreparationChannel{x}},
                        {+1, PreparationChannel{-x}}});
}

CorrectionMap optimal_rotation_correction(double theta) {
  const Povm povm = three_outcome_povm(theta);
  const BlochVector x = BlochVector::unit_x();
  std::map<int, ChannelDescriptor> ch;
  for (const auto &e : povm.elements()) {
    const BlochVector target = e.label == 0 ? x : -x;
    const double phi = xz_angle(target) - xz_angle(e.direction);
    ch.emplace(e.label, RotationChannel{BlochVector::unit_y(), phi});
  }
  return CorrectionMap(std::move(ch));
}

ProjectiveReference projective_reference(double alpha) {
  alpha = checked_quarter_angle(alpha, "alpha");
  const auto [c, s] = cos_sin(alpha);
  const BlochVector u{s, 0.0, c};
  const BlochVector x = BlochVector::unit_x();
  return {Povm({PovmElement::from_bloch(+1, 0.5, u),
                PovmElement::from_bloch(-1, 0.5, -u)}),
          CorrectionMap({{+1, PreparationChannel{x}}, {-1, PreparationChannel{-x}}})};
}

std::vector<InstrumentOutcome> apply_instrument(const QuantumInstrument &inst,
                                                const CorrectionMap &corr,
                                                const QubitState &state) {
  auto inst_labels = inst.labels();
  std::sort(inst_labels.begin(), inst_labels.end());
  if (inst_labels != corr.labels())
    throw ConfigurationError("instrument and correction outcome labels differ");

  std::vector<InstrumentOutcome> out;
  for (const auto &b : inst.branches()) {
    const QubitOperator unnormalized = inst.apply_branch(b.label, state.op());
    const double p = std::clamp(unnormalized.trace().real(), 0.0, 1.0);
    if (p <= kZeroWeight) {
      out.push_back({b.label, 0.0, std::nullopt});
      continue;
    }
    const QubitOperator corrected = corr.apply(b.label, unnormalized) * (1.0 / p);
    out.push_back({b.label, p, QubitState(corrected)});
  }
  return out;
}

} // namespace emur
