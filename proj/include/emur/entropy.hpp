// SPDX-License-Identifier: Apache-2.0
//
// Shannon entropy helpers. All logarithms are base 2; results are in bits.
#pragma once

#include <cstddef>
#include <vector>

namespace emur {

// Finite joint distribution p(x, y) with integer outcome labels. Rows index
// the first variable, columns the second.
class LabeledJointDistribution {
public:
  // Entries must be non-negative. A table summing to s with |s - 1| <= 1e-6 is
  // rescaled by 1/s; anything further off throws DomainError.
  LabeledJointDistribution(std::vector<int> row_labels,
                           std::vector<int> col_labels,
                           std::vector<double> row_major);

  std::size_t rows() const { return row_labels_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  const std::vector<int> &row_labels() const { return row_labels_; }
  const std::vector<int> &col_labels() const { return col_labels_; }

  double at(std::size_t r, std::size_t c) const { return p_[r * cols() + c]; }
  // Lookup by outcome labels; throws DomainError for unknown labels.
  double prob(int row_label, int col_label) const;

  std::vector<double> row_marginal() const;
  std::vector<double> col_marginal() const;

private:
  std::vector<int> row_labels_;
  std::vector<int> col_labels_;
  std::vector<double> p_;
};

// h(x) = entropy of a coin with bias (1+x)/2, for x in [0, 1].
double binary_h(double x);

// Inverse of binary_h on [0, 1] by bisection (h is strictly decreasing there).
double inverse_g(double y);

// H(row | column) in bits.
double conditional_entropy(const LabeledJointDistribution &joint);

} // namespace emur
