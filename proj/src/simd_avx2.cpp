// Compiled with -mavx2 -mfma; only reached after the runtime cpuid check.
#include "lrd/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#include <cmath>

namespace lrd {

namespace {

inline __m256d abs_pd(__m256d x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(x, mask);
}

}  // namespace

void kernel_weights_avx2(KernelKind k, const double* v, int n, double x, double h,
                         double* u, double* w) {
  const double inv_h = 1.0 / h;
  const __m256d vx = _mm256_set1_pd(x);
  const __m256d vih = _mm256_set1_pd(inv_h);
  const __m256d one = _mm256_set1_pd(1.0);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ui = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(v + i), vx), vih);
    const __m256d a = abs_pd(ui);
    const __m256d inside = _mm256_cmp_pd(a, one, _CMP_LE_OQ);
    __m256d wi;
    switch (k) {
      case KernelKind::uniform:
        wi = _mm256_mul_pd(_mm256_set1_pd(0.5), vih);
        break;
      case KernelKind::triangular:
        wi = _mm256_mul_pd(_mm256_sub_pd(one, a), vih);
        break;
      case KernelKind::epanechnikov:
        wi = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(0.75),
                                         _mm256_sub_pd(one, _mm256_mul_pd(ui, ui))),
                           vih);
        break;
      default:
        wi = _mm256_setzero_pd();
    }
    _mm256_storeu_pd(u + i, ui);
    _mm256_storeu_pd(w + i, _mm256_and_pd(wi, inside));
  }
  if (i < n) kernel_weights_scalar(k, v + i, n - i, x, h, u + i, w + i);
}

}  // namespace lrd

#else

namespace lrd {

void kernel_weights_avx2(KernelKind k, const double* v, int n, double x, double h,
                         double* u, double* w) {
  kernel_weights_scalar(k, v, n, x, h, u, w);
}

}  // namespace lrd

#endif
