// SPDX-License-Identifier: Apache-2.0
#include "emur/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "emur/errors.hpp"

namespace emur {

namespace {

constexpr double kClampTol = 1e-12;
constexpr double kRenormTol = 1e-6;
constexpr int kBisectionCap = 200;

// -p log2 p with 0 log 0 = 0.
double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

void require_unique(const std::vector<int> &labels, const char *what) {
  if (std::set<int>(labels.begin(), labels.end()).size() != labels.size())
    throw DomainError(std::string("duplicate ") + what + " label");
}

} // namespace

LabeledJointDistribution::LabeledJointDistribution(std::vector<int> row_labels,
                                                   std::vector<int> col_labels,
                                                   std::vector<double> row_major)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)),
      p_(std::move(row_major)) {
  if (row_labels_.empty() || col_labels_.empty())
    throw DomainError("joint distribution needs at least one row and column");
  if (p_.size() != rows() * cols())
    throw DomainError("joint distribution table has " + std::to_string(p_.size()) +
                      " entries, expected " + std::to_string(rows() * cols()));
  require_unique(row_labels_, "row");
  require_unique(col_labels_, "column");
  for (double &v : p_) {
    if (!std::isfinite(v) || v < -kClampTol)
      throw DomainError("joint distribution entry " + std::to_string(v) +
                        " is negative or not finite");
    v = std::max(v, 0.0);
  }
  const double s = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(s - 1.0) > kRenormTol)
    throw DomainError("joint distribution sums to " + std::to_string(s));
  for (double &v : p_)
    v /= s;
}

double LabeledJointDistribution::prob(int row_label, int col_label) const {
  const auto r = std::find(row_labels_.begin(), row_labels_.end(), row_label);
  const auto c = std::find(col_labels_.begin(), col_labels_.end(), col_label);
  if (r == row_labels_.end() || c == col_labels_.end())
    throw DomainError("unknown outcome label");
  return at(static_cast<std::size_t>(r - row_labels_.begin()),
            static_cast<std::size_t>(c - col_labels_.begin()));
}

std::vector<double> LabeledJointDistribution::row_marginal() const {
  std::vector<double> m(rows(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c)
      m[r] += at(r, c);
  return m;
}

std::vector<double> LabeledJointDistribution::col_marginal() const {
  std::vector<double> m(cols(), 0.0);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c)
      m[c] += at(r, c);
  return m;
}

double binary_h(double x) {
  if (!(x >= -kClampTol && x <= 1.0 + kClampTol))
    throw DomainError("binary_h argument " + std::to_string(x) + " outside [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  return plogp(0.5 * (1.0 + x)) + plogp(0.5 * (1.0 - x));
}

double inverse_g(double y) {
  if (!(y >= 0.0 && y <= 1.0))
    throw DomainError("inverse_g argument " + std::to_string(y) + " outside [0, 1]");
  // Invariant: h(lo) > y >= h(hi) except at the degenerate ends.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < kBisectionCap && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (binary_h(mid) > y)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double conditional_entropy(const LabeledJointDistribution &joint) {
  const auto py = joint.col_marginal();
  double h = 0.0;
  for (std::size_t c = 0; c < joint.cols(); ++c) {
    if (py[c] <= 0.0)
      continue;
    for (std::size_t r = 0; r < joint.rows(); ++r) {
      const double pxy = joint.at(r, c);
      if (pxy > 0.0)
        h -= pxy * std::log2(pxy / py[c]);
    }
  }
  return std::max(h, 0.0);
}

} // namespace emur
