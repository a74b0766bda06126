#include "lrd/edf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lrd {

SortedSample sort_sample(const std::vector<double>& x,
                         const std::optional<std::vector<double>>& w) {
  if (x.empty()) throw InvalidInput("empty sample");
  for (double v : x)
    if (!std::isfinite(v)) throw InvalidInput("non-finite value in sample");
  if (w) {
    if (w->size() != x.size()) throw InvalidInput("weight length mismatch");
    for (double v : *w)
      if (!std::isfinite(v)) throw InvalidInput("non-finite weight");
  }

  SortedSample s;
  const int n = static_cast<int>(x.size());
  s.sort_index.resize(n);
  std::iota(s.sort_index.begin(), s.sort_index.end(), 0);
  std::stable_sort(s.sort_index.begin(), s.sort_index.end(),
                   [&](int a, int b) { return x[a] < x[b]; });
  s.values.resize(n);
  s.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    s.values[i] = x[s.sort_index[i]];
    s.weights[i] = w ? (*w)[s.sort_index[i]] : 1.0;
  }
  s.weight_prefix.assign(n + 1, 0.0);
  for (int i = 0; i < n; ++i) s.weight_prefix[i + 1] = s.weight_prefix[i] + s.weights[i];
  s.weight_mean = s.weight_prefix[n] / n;
  return s;
}

EdfValues edf_at_points(const SortedSample& s) {
  const int n = s.n();
  EdfValues f;
  f.values.resize(n);
  // Inclusive counting: observations tied with x_i all contribute.
  double cum = 0.0;
  int i = 0;
  while (i < n) {
    int j = i;
    double block = 0.0;
    while (j < n && s.values[j] == s.values[i]) block += s.weights[j++];
    cum += block;
    for (int k = i; k < j; ++k) f.values[k] = cum / n;
    i = j;
  }
  return f;
}

double edf_eval(const SortedSample& s, double t) {
  auto it = std::upper_bound(s.values.begin(), s.values.end(), t);
  const int k = static_cast<int>(it - s.values.begin());
  return s.weight_prefix[k] / s.n();
}

}  // namespace lrd
