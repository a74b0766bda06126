#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrd {

// Stream splitting: every (seed, index) pair gets an independent generator by
// running the pair through splitmix64, the recommended seeding scheme for
// mt19937_64.  Deterministic across runs and safe for parallel consumers.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index * 0xd1342543de82ef95ULL + 1)));
}

// Box-Muller with explicit uniforms, so draws do not depend on the standard
// library's unspecified normal_distribution algorithm.
class NormalSampler {
 public:
  explicit NormalSampler(std::mt19937_64 gen) : gen_(gen) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * M_PI * u2);
  }

  double uniform() {  // in [0, 1)
    return (gen_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lrd
