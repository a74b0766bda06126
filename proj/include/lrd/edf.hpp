#pragma once

#include <optional>
#include <vector>

#include "lrd/errors.hpp"

namespace lrd {

// Sorted data with optional per-observation weights.  Immutable after
// construction; all estimators read from it concurrently.
struct SortedSample {
  std::vector<double> values;      // ascending
  std::vector<int> sort_index;     // values[i] == original[sort_index[i]]
  std::vector<double> weights;     // aligned with values
  std::vector<double> weight_prefix;  // weight_prefix[k] = sum of first k weights
  double weight_mean = 1.0;

  int n() const { return static_cast<int>(values.size()); }
};

// Per-observation EDF values F-hat_i (weighted: (1/n) sum_j w_j 1(x_j <= x_i)),
// aligned with sorted order.  Ties counted inclusively.
struct EdfValues {
  std::vector<double> values;
};

SortedSample sort_sample(const std::vector<double>& x,
                         const std::optional<std::vector<double>>& w = std::nullopt);

EdfValues edf_at_points(const SortedSample& s);

// Right-continuous step function value at t.
double edf_eval(const SortedSample& s, double t);

}  // namespace lrd
