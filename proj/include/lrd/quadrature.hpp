#pragma once

#include <algorithm>
#include <vector>

#include "lrd/errors.hpp"

namespace lrd::quad {

// Gauss-Legendre rule on [-1,1], cached per order.
struct GLRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GLRule& gl_rule(int order);

// Calls f(u, w) for each node of an order-n rule mapped to [a, b].
template <class F>
void foreach_node(double a, double b, int order, F&& f) {
  if (!(b > a)) return;
  const GLRule& r = gl_rule(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (size_t k = 0; k < r.nodes.size(); ++k)
    f(mid + half * r.nodes[k], half * r.weights[k]);
}

// Same, with the interval subdivided at interior breakpoints.  Breaks outside
// (a, b) are ignored; panels are exact for piecewise-polynomial integrands
// whose kinks are all listed.
template <class F>
void foreach_node_breaks(double a, double b, std::vector<double> breaks, int order, F&& f) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double lo = a;
  for (double t : breaks) {
    if (t <= lo || t > b) continue;
    foreach_node(lo, t, order, f);
    lo = t;
  }
}

template <class F>
double integrate(F&& f, double a, double b, int order = 32) {
  double s = 0.0;
  foreach_node(a, b, order, [&](double u, double w) { s += w * f(u); });
  return s;
}

template <class F>
double integrate_breaks(F&& f, double a, double b, const std::vector<double>& breaks,
                        int order = 32) {
  double s = 0.0;
  foreach_node_breaks(a, b, breaks, order, [&](double u, double w) { s += w * f(u); });
  return s;
}

}  // namespace lrd::quad
