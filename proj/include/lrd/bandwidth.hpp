#pragma once

#include "lrd/edf.hpp"
#include "lrd/kernels.hpp"

namespace lrd {

// Rule-of-thumb bandwidth h = C(p, ell, kernel) * sigma-hat * n^{-1/(2p+3)}
// with sigma-hat = min(sample SD, IQR/1.349) and a Gaussian-reference
// constant balancing the interior asymptotic bias and variance.
double rot_bandwidth(const SortedSample& s, int p, int ell,
                     const KernelSpec& k = KernelSpec{KernelKind::epanechnikov});

// The reference constant itself (exposed for testing).
double rot_constant(int p, int ell, const KernelSpec& k);

}  // namespace lrd
