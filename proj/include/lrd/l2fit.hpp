#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "lrd/fit.hpp"

namespace lrd {

// Design measure G for the local L2 estimator.  Non-empirical designs need a
// known support interval (the estimator's boundary adaptivity comes from
// truncating the integration region there).
struct DesignSpec {
  enum class Kind { lebesgue, known_density, empirical } kind = Kind::lebesgue;
  std::function<double(double)> g;  // density of G, known_density only
  std::optional<std::pair<double, double>> support;
};

PointFit l2_fit_point(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                      const DesignSpec& design, double x);

// Plug-in variance matrix (1/n) sum_i xi_i xi_i' with
// xi_i = int R(v) [w_i 1(x_i <= x+hv) - Fhat(x+hv)] K(v) g(x+hv) dv,
// normalized coordinates; the empirical centering makes the rows mean zero.
Eigen::MatrixXd l2_sigma_hat(const SortedSample& s, const FitConfig& cfg,
                             const DesignSpec& design, double x);

// Numerical-derivative estimator of (f, f', ..., f^{(p-1)}): a fixed-design
// projection onto the derivative basis, Gamma known by quadrature.
Eigen::VectorXd nd_estimate(const SortedSample& s, const FitConfig& cfg,
                            std::pair<double, double> support, double x);

// Asymptotic sandwich Gamma^{-1} (int Pdot Pdot' K^2) Gamma^{-1} of the ND
// estimator (f = 1 normalization), entry (ell, ell).
double nd_sandwich_variance(int p, int ell, const KernelSpec& k, double lo = -1.0,
                            double hi = 1.0);

}  // namespace lrd
