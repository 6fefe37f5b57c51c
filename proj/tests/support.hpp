// SPDX-License-Identifier: Apache-2.0
//
// Shared generators for property-style tests.
#pragma once

#include <cmath>
#include <random>

#include "emur/qubit.hpp"

namespace emur::test {

inline std::mt19937_64 &rng() {
  static std::mt19937_64 gen(0x5eed1234u);
  return gen;
}

inline BlochVector random_unit() {
  std::normal_distribution<double> g;
  BlochVector v{g(rng()), g(rng()), g(rng())};
  return v * (1.0 / v.norm());
}

// Uniform in the Bloch ball.
inline BlochVector random_ball() {
  std::uniform_real_distribution<double> u;
  return random_unit() * std::cbrt(u(rng()));
}

inline double uniform(double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

} // namespace emur::test
