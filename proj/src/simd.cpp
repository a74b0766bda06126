#include "lrd/simd.hpp"

#include <cmath>

namespace lrd {

void kernel_weights_scalar(KernelKind k, const double* v, int n, double x, double h,
                           double* u, double* w) {
  const double inv_h = 1.0 / h;
  switch (k) {
    case KernelKind::uniform:
      for (int i = 0; i < n; ++i) {
        const double ui = (v[i] - x) * inv_h;
        u[i] = ui;
        w[i] = std::abs(ui) <= 1.0 ? 0.5 * inv_h : 0.0;
      }
      break;
    case KernelKind::triangular:
      for (int i = 0; i < n; ++i) {
        const double ui = (v[i] - x) * inv_h;
        const double a = std::abs(ui);
        u[i] = ui;
        w[i] = a <= 1.0 ? (1.0 - a) * inv_h : 0.0;
      }
      break;
    case KernelKind::epanechnikov:
      for (int i = 0; i < n; ++i) {
        const double ui = (v[i] - x) * inv_h;
        u[i] = ui;
        w[i] = std::abs(ui) <= 1.0 ? 0.75 * (1.0 - ui * ui) * inv_h : 0.0;
      }
      break;
  }
}

bool simd_avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
#else
  return false;
#endif
}

const char* simd_backend() { return simd_avx2_available() ? "avx2" : "scalar"; }

void kernel_weights(KernelKind k, const double* v, int n, double x, double h,
                    double* u, double* w) {
  if (simd_avx2_available())
    kernel_weights_avx2(k, v, n, x, h, u, w);
  else
    kernel_weights_scalar(k, v, n, x, h, u, w);
}

}  // namespace lrd
