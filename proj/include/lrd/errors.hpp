#pragma once

#include <stdexcept>
#include <string>

namespace lrd {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
  using Error::Error;
};

// Fewer observations inside the kernel window than basis dimensions.
struct InsufficientLocalData : Error {
  using Error::Error;
};

// Normalized Gram matrix condition number above the configured threshold.
struct SingularGram : Error {
  using Error::Error;
};

struct SingularBlock : Error {
  using Error::Error;
};

struct DegenerateVariance : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

}  // namespace lrd
