#pragma once

#include "lrd/kernels.hpp"

namespace lrd {

// Fills u[i] = (v[i] - x)/h and w[i] = K(u[i])/h for i = 0..n-1.  The hot loop
// of every local fit; an AVX2 variant is selected at runtime when the host
// supports it.  Both variants produce bitwise-identical output.
void kernel_weights(KernelKind k, const double* v, int n, double x, double h,
                    double* u, double* w);

void kernel_weights_scalar(KernelKind k, const double* v, int n, double x, double h,
                           double* u, double* w);
void kernel_weights_avx2(KernelKind k, const double* v, int n, double x, double h,
                         double* u, double* w);

bool simd_avx2_available();
const char* simd_backend();  // "avx2" or "scalar"

}  // namespace lrd
