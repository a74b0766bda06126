#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lrd/band.hpp"
#include "lrd/fit.hpp"
#include "lrd/rng.hpp"

namespace lrd {

// Data-generating processes with closed-form truth.  The kinked density is
// continuous at zero with different one-sided slopes, exercising split-basis
// estimation.
struct DgpSpec {
  enum class Kind { gaussian, exponential, uniform, kinked } kind = Kind::gaussian;
  double mu = 0.0, sigma = 1.0;  // gaussian
  double rate = 1.0;             // exponential
  double a = 0.0, b = 1.0;       // uniform

  double cdf(double x) const;
  double pdf(double x) const;
  // One-sided density derivatives (equal except at the kink).
  double dpdf_left(double x) const;
  double dpdf_right(double x) const;
  double quantile(double u) const;
  std::pair<double, double> support() const;  // +-inf for gaussian

  std::vector<double> sample(int n, std::uint64_t seed, std::uint64_t rep) const;
};

struct ExperimentResult {
  double coverage = 0.0;
  double mean_bias = 0.0;
  double sd = 0.0;
  double mean_se = 0.0;
  int reps = 0;
  std::uint64_t seed = 0;
  bool all_q_ge_z = true;  // uniform experiments: band never narrower than CI
};

// Fraction of replications whose pointwise CI covers the truth; cfg.h <= 0
// requests a per-replication rule-of-thumb bandwidth.
ExperimentResult run_pointwise_coverage(const DgpSpec& dgp, int n, int reps,
                                        const FitConfig& cfg, double x, double alpha,
                                        std::uint64_t seed);

ExperimentResult run_uniform_coverage(const DgpSpec& dgp, int n, int reps, const FitConfig& cfg,
                                      const BandConfig& band_cfg, std::uint64_t seed);

struct EfficiencyRow {
  int j = 0;  // 0 = base estimator row
  double mc_variance = 0.0;  // of n h^{2l+1}-scaled estimates
  double mc_mean = 0.0;
};

std::vector<EfficiencyRow> run_efficiency(const DgpSpec& dgp, int n, int reps, int p, int ell,
                                          const std::vector<int>& j_list, double x,
                                          std::uint64_t seed, double h = 0.0);

// Linearized Studentized process at x for one sample, using population
// matrices computed from the true F and f by quadrature.
double linearized_process_eval(const DgpSpec& dgp, const FitConfig& cfg, double x,
                               const std::vector<double>& sample);

}  // namespace lrd
