#include "lrd/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace lrd::quad {

namespace {

// Newton iteration on Legendre polynomials; standard Golub-Welsch-free
// construction, accurate to machine precision for the orders used here.
GLRule build_rule(int n) {
  if (n < 1) throw QuadratureError("quadrature order must be positive");
  GLRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return r;
}

}  // namespace

const GLRule& gl_rule(int order) {
  static std::mutex mu;
  static std::map<int, GLRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

}  // namespace lrd::quad
