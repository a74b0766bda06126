#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "lrd/fit.hpp"

namespace lrd {

struct BandConfig {
  std::vector<double> grid;
  double alpha = 0.05;
  int draws = 2000;
  std::uint64_t seed = 12345;
  int deriv = 0;
  double jitter_start = 1e-10;
};

struct BandDiagnostics {
  double jitter_used = 0.0;  // 0 when the correlation factorizes as-is
  bool eigen_clipped = false;
};

struct BandResult {
  std::vector<double> x, center, se, lo, hi;
  double quantile = 0.0;
  int draws = 0;
  BandDiagnostics diag;
};

// (1/n^2) sum_i psi_i(x) psi_i(y)'.
Eigen::MatrixXd cross_sigma_hat(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                                double x, double y);

// n x m matrix of scalar influences over the grid; column j is
// c' Gamma(x_j)^{-1} psi_i(x_j) for the target-derivative direction c.
Eigen::MatrixXd influence_matrix(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                                 const std::vector<double>& grid, int deriv);

// Correlation of the Studentized statistics across grid points: unit diagonal
// exactly, off-diagonals clipped into [-1, 1].
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& influences);

double gp_sup_quantile(const Eigen::MatrixXd& corr, double alpha, int draws, std::uint64_t seed,
                       double jitter_start = 1e-10, BandDiagnostics* diag = nullptr);

// All max-abs draws, sorted ascending (the quantile is an order statistic of
// these); exposed so coverage experiments can reuse one draw set.
std::vector<double> gp_sup_draws(const Eigen::MatrixXd& corr, int draws, std::uint64_t seed,
                                 double jitter_start = 1e-10, BandDiagnostics* diag = nullptr);

BandResult confidence_band(const SortedSample& s, const EdfValues& F, const GridFit& gridfit,
                           const BandConfig& cfg);

}  // namespace lrd
