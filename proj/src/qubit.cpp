// SPDX-License-Identifier: Apache-2.0
#include "emur/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "emur/errors.hpp"

namespace emur {

namespace {

constexpr double kValidationTol = 1e-9;

} // namespace

double BlochVector::norm() const { return std::sqrt(dot(*this)); }

QubitOperator QubitOperator::from_pauli(double a0, const BlochVector &a) {
  return {cplx(a0 + a.z, 0.0), cplx(a.x, -a.y), cplx(a.x, a.y),
          cplx(a0 - a.z, 0.0)};
}

QubitOperator QubitOperator::operator+(const QubitOperator &o) const {
  QubitOperator r = *this;
  r += o;
  return r;
}

QubitOperator &QubitOperator::operator+=(const QubitOperator &o) {
  for (std::size_t i = 0; i < 4; ++i)
    m_[i] += o.m_[i];
  return *this;
}

QubitOperator QubitOperator::operator-(const QubitOperator &o) const {
  QubitOperator r;
  for (std::size_t i = 0; i < 4; ++i)
    r.m_[i] = m_[i] - o.m_[i];
  return r;
}

QubitOperator QubitOperator::operator*(const QubitOperator &o) const {
  const auto &a = m_;
  const auto &b = o.m_;
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

QubitOperator QubitOperator::operator*(cplx s) const {
  return {m_[0] * s, m_[1] * s, m_[2] * s, m_[3] * s};
}

QubitOperator QubitOperator::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]),
          std::conj(m_[3])};
}

bool QubitOperator::is_hermitian(double tol) const {
  return distance(adjoint()) <= tol;
}

double QubitOperator::distance(const QubitOperator &o) const {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i)
    d = std::max(d, std::abs(m_[i] - o.m_[i]));
  return d;
}

BlochVector QubitOperator::pauli_vector() const {
  // Hermitian part H = (A + A^dagger)/2 has H01 = a_x - i a_y.
  const cplx h01 = 0.5 * (m_[1] + std::conj(m_[2]));
  return {h01.real(), -h01.imag(), 0.5 * (m_[0].real() - m_[3].real())};
}

std::array<double, 2> QubitOperator::hermitian_eigenvalues() const {
  const double a0 = pauli_trace_part();
  const double r = pauli_vector().norm();
  return {a0 - r, a0 + r};
}

BlochForm QubitOperator::bloch() const {
  const double w = pauli_trace_part();
  const BlochVector a = pauli_vector();
  if (w == 0.0)
    return {0.0, a};
  return {w, a * (1.0 / w)};
}

QubitState::QubitState(const QubitOperator &rho) {
  if (!rho.is_hermitian(kValidationTol))
    throw InvalidState("density operator is not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kValidationTol || std::abs(rho.trace().imag()) > kValidationTol)
    throw InvalidState("density operator trace " + std::to_string(tr) + " != 1");
  BlochVector r = rho.pauli_vector() * 2.0;
  const double len = r.norm();
  if (len > 1.0 + kValidationTol)
    throw InvalidState("density operator is not positive semidefinite");
  if (len > 1.0)
    r = r * (1.0 / len);
  op_ = QubitOperator::from_pauli(0.5, r * 0.5);
}

QubitState QubitState::pure(const BlochVector &n) {
  return QubitState(projector_from_direction(n));
}

QubitState QubitState::from_bloch(const BlochVector &r) {
  return QubitState(QubitOperator::from_pauli(0.5, r * 0.5));
}

QubitOperator projector_from_direction(const BlochVector &n) {
  if (std::abs(n.norm() - 1.0) > kValidationTol)
    throw InvalidDirection("direction has norm " + std::to_string(n.norm()) +
                           ", expected 1");
  return QubitOperator::from_bloch(0.5, n);
}

double born_probability(const QubitOperator &effect, const QubitState &state) {
  if (!effect.is_hermitian(kValidationTol))
    throw InvalidEffect("effect is not Hermitian");
  const auto ev = effect.hermitian_eigenvalues();
  if (ev[0] < -kValidationTol || ev[1] > 1.0 + kValidationTol)
    throw InvalidEffect("effect eigenvalues outside [0, 1]");
  const double p = (effect * state.op()).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

Observable::Observable(const Eigenstate &first, const Eigenstate &second)
    : states_{first, second} {
  if (first.label == second.label)
    throw ConfigurationError("observable eigenvalue labels must differ");
  for (const auto &s : states_) {
    const auto &p = s.projector;
    if (!p.is_hermitian(kValidationTol) ||
        std::abs(p.trace().real() - 1.0) > kValidationTol ||
        (p * p).distance(p) > kValidationTol)
      throw InvalidEffect("observable eigenprojector is not rank one");
  }
  if ((first.projector * second.projector).distance(QubitOperator::zero()) >
          kValidationTol ||
      (first.projector + second.projector).distance(QubitOperator::identity()) >
          kValidationTol)
    throw InvalidEffect("observable eigenprojectors are not orthogonal and complete");
}

Observable Observable::along(const BlochVector &n) {
  return Observable({+1, projector_from_direction(n)},
                    {-1, projector_from_direction(-n)});
}

double max_overlap(const Observable &a, const Observable &b) {
  double best = 0.0;
  for (const auto &ea : a.eigenstates())
    for (const auto &eb : b.eigenstates())
      // |<a|b>|^2 = Tr[P_a P_b] for rank-one projectors.
      best = std::max(best, (ea.projector * eb.projector).trace().real());
  return std::sqrt(std::clamp(best, 0.0, 1.0));
}

} // namespace emur
