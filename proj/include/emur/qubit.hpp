// SPDX-License-Identifier: Apache-2.0
//
// Closed-form 2x2 algebra for qubit states, effects and observables.
#pragma once

#include <array>
#include <complex>

namespace emur {

using cplx = std::complex<double>;

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const BlochVector &o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const;
  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator*(double s) const { return {x * s, y * s, z * s}; }
  BlochVector operator+(const BlochVector &o) const {
    return {x + o.x, y + o.y, z + o.z};
  }

  static BlochVector unit_x() { return {1.0, 0.0, 0.0}; }
  static BlochVector unit_y() { return {0.0, 1.0, 0.0}; }
  static BlochVector unit_z() { return {0.0, 0.0, 1.0}; }
};

// Decomposition of a Hermitian operator as weight * (1 + direction . sigma).
// For operators with zero trace part the weight is 0 and the direction holds
// the raw Pauli coefficients.
struct BlochForm {
  double weight = 0.0;
  BlochVector direction;
};

// Row-major 2x2 complex matrix.
class QubitOperator {
public:
  QubitOperator() = default;
  QubitOperator(cplx a00, cplx a01, cplx a10, cplx a11)
      : m_{a00, a01, a10, a11} {}

  static QubitOperator zero() { return {}; }
  static QubitOperator identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static QubitOperator pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
  static QubitOperator pauli_y() { return {0.0, cplx(0, -1), cplx(0, 1), 0.0}; }
  static QubitOperator pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

  // a0 * 1 + a . sigma
  static QubitOperator from_pauli(double a0, const BlochVector &a);
  // weight * (1 + n . sigma)
  static QubitOperator from_bloch(double weight, const BlochVector &n) {
    return from_pauli(weight, n * weight);
  }

  cplx operator()(int row, int col) const { return m_[2 * row + col]; }

  QubitOperator operator+(const QubitOperator &o) const;
  QubitOperator operator-(const QubitOperator &o) const;
  QubitOperator operator*(const QubitOperator &o) const;
  QubitOperator operator*(cplx s) const;
  QubitOperator &operator+=(const QubitOperator &o);

  QubitOperator adjoint() const;
  cplx trace() const { return m_[0] + m_[3]; }

  bool is_hermitian(double tol = 1e-12) const;
  // Largest absolute entrywise difference.
  double distance(const QubitOperator &o) const;

  // Eigenvalues (ascending) of the Hermitian part.
  std::array<double, 2> hermitian_eigenvalues() const;
  // Bloch decomposition of the Hermitian part.
  BlochForm bloch() const;
  // Pauli coefficients (a0, a) of the Hermitian part.
  double pauli_trace_part() const { return 0.5 * trace().real(); }
  BlochVector pauli_vector() const;

private:
  std::array<cplx, 4> m_{};
};

inline QubitOperator operator*(cplx s, const QubitOperator &op) { return op * s; }

// Density operator: Hermitian, unit trace, positive semidefinite.
class QubitState {
public:
  // Validates with tolerance 1e-9 and clamps eigenvalues into [0, 1].
  explicit QubitState(const QubitOperator &rho);

  static QubitState pure(const BlochVector &n);
  static QubitState from_bloch(const BlochVector &r);
  static QubitState maximally_mixed() { return from_bloch({}); }

  const QubitOperator &op() const { return op_; }
  BlochVector bloch_vector() const { return op_.pauli_vector() * 2.0; }

private:
  QubitOperator op_;
};

// Two-outcome observable with eigenvalues +1 and -1.
class Observable {
public:
  struct Eigenstate {
    int label;
    QubitOperator projector;
  };

  // Projectors must be rank one, orthogonal and complete.
  Observable(const Eigenstate &first, const Eigenstate &second);

  // Observable n . sigma; eigenstate +1 is listed first.
  static Observable along(const BlochVector &n);
  static Observable sigma_x() { return along(BlochVector::unit_x()); }
  static Observable sigma_z() { return along(BlochVector::unit_z()); }

  const std::array<Eigenstate, 2> &eigenstates() const { return states_; }

private:
  std::array<Eigenstate, 2> states_;
};

// (1 + n . sigma) / 2 for a unit direction n.
QubitOperator projector_from_direction(const BlochVector &n);

// Tr[effect * state], clamped to [0, 1].
double born_probability(const QubitOperator &effect, const QubitState &state);

// max over eigenvector pairs of |<a_i|b_j>|.
double max_overlap(const Observable &a, const Observable &b);

} // namespace emur
