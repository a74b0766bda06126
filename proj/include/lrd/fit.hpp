#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lrd/basis.hpp"
#include "lrd/edf.hpp"
#include "lrd/kernels.hpp"

namespace lrd {

struct FitConfig {
  KernelSpec kernel;
  BasisSpec basis;
  double h = 0.0;  // data units
  int deriv = 0;   // target: -1 = CDF, 0 = density, 1 = f', ...
  std::optional<BasisSpec> inference_basis;  // higher order, for bias-robust CIs
};

// Everything produced by one local fit.  gamma/sigma/omega live in normalized
// coordinates u = (x_i - x)/h; theta is mapped back to data units, so its
// entries estimate (F(x), f(x), f'(x), ...).  sigma follows the (1/n^2)-sum
// convention, which makes omega = gamma^{-1} sigma gamma^{-1} carry the 1/n of
// the data-unit variance already: Var[c' theta] = c' Upsilon L omega L'
// Upsilon' c with no further scaling.
struct PointFit {
  double x = 0.0;
  double h = 0.0;
  BasisSpec basis;
  int n = 0;
  int n_local = 0;
  Eigen::VectorXd b;      // normalized-coordinate coefficients
  Eigen::VectorXd theta;  // data units
  Eigen::MatrixXd gamma, sigma, omega;
  Eigen::MatrixXd coeff_map;  // L
  Eigen::VectorXd upsilon;    // diag of Upsilon_h
  bool ok = true;
  std::string flag;

  Eigen::MatrixXd omega_data() const;  // Upsilon L omega L' Upsilon
  double estimate(int deriv) const;
  double variance(int deriv) const;
  double se(int deriv) const;
};

struct Interval {
  double lo = 0.0, hi = 0.0;
  double center = 0.0, se = 0.0;
};

struct GridFit {
  std::vector<PointFit> fits;
  std::vector<PointFit> inference;  // parallel to fits when inference basis set
  FitConfig cfg;
};

PointFit fit_point(const SortedSample& s, const EdfValues& F, const FitConfig& cfg, double x);

// Gram matrix (1/n) sum_i W_i R(u_i) R(u_i)'; zero matrix when no local data.
Eigen::MatrixXd gamma_hat(const SortedSample& s, const FitConfig& cfg, double x);

// Influence vectors psi_i for all observations (n x dim, rows in sorted
// order), computed with the suffix-sum fast path.
Eigen::MatrixXd psi_hat_all(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                            double x);

// (1/n^2) sum_i psi_i psi_i' from explicit influence rows.
Eigen::MatrixXd sigma_hat(const Eigen::MatrixXd& psi);

// Scalar influences s_i = c' gamma^{-1} psi_i(x) (normalized coordinates) for
// all i; the cheap building block for cross-covariances over a grid.
Eigen::VectorXd influence_scalars(const SortedSample& s, const EdfValues& F,
                                  const FitConfig& cfg, double x, const Eigen::VectorXd& c);

Interval ci_pointwise(const PointFit& fit, int deriv, double alpha);

GridFit fit_grid(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                 const std::vector<double>& grid);

// Weighted LS with a single linear inequality a' theta >= bound (data units).
PointFit fit_point_constrained(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                               double x, const Eigen::VectorXd& a, double bound);

}  // namespace lrd
