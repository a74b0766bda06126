#include "lrd/kernels.hpp"

#include <cmath>

namespace lrd {

double kernel_eval(const KernelSpec& k, double u) {
  const double a = std::abs(u);
  if (a > 1.0) return 0.0;
  switch (k.kind) {
    case KernelKind::uniform:
      return 0.5;
    case KernelKind::triangular:
      return 1.0 - a;
    case KernelKind::epanechnikov:
      return 0.75 * (1.0 - u * u);
  }
  return 0.0;
}

KernelKind kernel_from_string(const std::string& name) {
  if (name == "uniform") return KernelKind::uniform;
  if (name == "triangular") return KernelKind::triangular;
  if (name == "epanechnikov") return KernelKind::epanechnikov;
  throw InvalidInput("unknown kernel: " + name);
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::uniform: return "uniform";
    case KernelKind::triangular: return "triangular";
    case KernelKind::epanechnikov: return "epanechnikov";
  }
  return "?";
}

}  // namespace lrd
