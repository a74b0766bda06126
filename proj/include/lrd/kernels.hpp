#pragma once

#include <string>

#include "lrd/errors.hpp"

namespace lrd {

enum class KernelKind { uniform, triangular, epanechnikov };

struct KernelSpec {
  KernelKind kind = KernelKind::epanechnikov;
};

// K(u): nonnegative, symmetric, supported on [-1,1], integrates to 1.
double kernel_eval(const KernelSpec& k, double u);

KernelKind kernel_from_string(const std::string& name);
std::string to_string(KernelKind kind);

}  // namespace lrd
