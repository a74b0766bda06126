#include <doctest.h>

#include <cmath>

#include "lrd/band.hpp"
#include "lrd/normal.hpp"
#include "lrd/rng.hpp"

using namespace lrd;

namespace {

SortedSample gaussian_sample(int n, std::uint64_t seed) {
  NormalSampler gen(rng_stream(seed, 0));
  std::vector<double> x(n);
  for (double& v : x) v = gen();
  return sort_sample(x);
}

}  // namespace

TEST_CASE("cross covariance at x = y equals the pointwise variance matrix") {
  const SortedSample s = gaussian_sample(300, 1);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.7;
  const Eigen::MatrixXd same = cross_sigma_hat(s, F, cfg, 0.2, 0.2);
  const Eigen::MatrixXd sig = fit_point(s, F, cfg, 0.2).sigma;
  CHECK((same - sig).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cross covariance symmetry and dense oracle") {
  const SortedSample s = gaussian_sample(50, 2);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 1;
  cfg.h = 0.6;
  const double x = -0.5, y = 0.4;
  const Eigen::MatrixXd axy = cross_sigma_hat(s, F, cfg, x, y);
  const Eigen::MatrixXd ayx = cross_sigma_hat(s, F, cfg, y, x);
  CHECK((axy - ayx.transpose()).cwiseAbs().maxCoeff() < 1e-15);

  const Eigen::MatrixXd px = psi_hat_all(s, F, cfg, x);
  const Eigen::MatrixXd py = psi_hat_all(s, F, cfg, y);
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < s.n(); ++i)
    want += px.row(i).transpose() * py.row(i);
  want /= static_cast<double>(s.n()) * s.n();
  CHECK((axy - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("correlation matrix has exact unit diagonal and clipped entries") {
  const SortedSample s = gaussian_sample(400, 3);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.6;
  const std::vector<double> grid = {-0.8, -0.3, 0.0, 0.3, 0.8};
  const Eigen::MatrixXd corr = correlation_matrix(influence_matrix(s, F, cfg, grid, 0));
  for (int i = 0; i < corr.rows(); ++i) {
    CHECK(corr(i, i) == 1.0);
    for (int j = 0; j < corr.cols(); ++j) {
      CHECK(corr(i, j) <= 1.0);
      CHECK(corr(i, j) >= -1.0);
    }
  }
  CHECK((corr - corr.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("distant grid points decorrelate") {
  const SortedSample s = gaussian_sample(5000, 4);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.25;
  const std::vector<double> grid = {-0.5, 0.5};  // 4h apart
  const Eigen::MatrixXd corr = correlation_matrix(influence_matrix(s, F, cfg, grid, 0));
  CHECK(std::abs(corr(0, 1)) < 0.2);
}

TEST_CASE("sup quantile of a single standard normal coordinate") {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Identity(1, 1);
  const double q = gp_sup_quantile(one, 0.05, 5000, 77);
  CHECK(std::abs(q - 1.96) < 0.08);
  // a perfectly correlated vector is the same degenerate process up to the
  // factorization jitter
  Eigen::MatrixXd flat = Eigen::MatrixXd::Ones(6, 6);
  CHECK(gp_sup_quantile(flat, 0.05, 5000, 77) == doctest::Approx(q).epsilon(0.02));
}

TEST_CASE("independent coordinates match the closed-form max quantile") {
  const int m = 10;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
  const double q = gp_sup_quantile(id, 0.05, 6000, 5);
  const double target = normal_quantile(0.5 * (1.0 + std::pow(0.95, 1.0 / m)));
  CHECK(target == doctest::Approx(2.80).epsilon(1e-2));
  CHECK(std::abs(q - target) < 0.12);
  CHECK(q >= 1.96);
  CHECK(q <= 2.81 + 0.12);  // Bonferroni ceiling
}

TEST_CASE("quantile is deterministic in the seed and validated") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
  CHECK(gp_sup_quantile(id, 0.1, 500, 9) == gp_sup_quantile(id, 0.1, 500, 9));
  CHECK(gp_sup_quantile(id, 0.1, 500, 9) != gp_sup_quantile(id, 0.1, 500, 10));
  CHECK_THROWS_AS(gp_sup_quantile(id, 0.0, 500, 9), InvalidInput);
  CHECK_THROWS_AS(gp_sup_quantile(id, 0.1, 50, 9), InvalidInput);
}

TEST_CASE("confidence band behavior across levels and grids") {
  const SortedSample s = gaussian_sample(1200, 6);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.5;
  BandConfig bc;
  for (int i = 0; i < 15; ++i) bc.grid.push_back(-1.0 + 2.0 * i / 14);
  bc.draws = 1500;
  const GridFit gf = fit_grid(s, F, cfg, bc.grid);

  bc.alpha = 0.05;
  const BandResult tight = confidence_band(s, F, gf, bc);
  bc.alpha = 0.5;
  const BandResult loose = confidence_band(s, F, gf, bc);
  for (size_t i = 0; i < tight.x.size(); ++i)
    CHECK(tight.hi[i] - tight.lo[i] > loose.hi[i] - loose.lo[i]);

  // single-point grid: the quantile reverts to the pointwise normal one
  BandConfig single;
  single.grid = {0.0};
  single.draws = 5000;
  single.alpha = 0.05;
  const GridFit g1 = fit_grid(s, F, cfg, single.grid);
  const BandResult point = confidence_band(s, F, g1, single);
  CHECK(std::abs(point.quantile - 1.96) < 0.08);
}

TEST_CASE("bands built from a robust inference basis use its fits") {
  const SortedSample s = gaussian_sample(900, 8);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.6;
  BasisSpec inf;
  inf.p = 3;
  cfg.inference_basis = inf;
  BandConfig bc;
  for (int i = 0; i < 8; ++i) bc.grid.push_back(-0.7 + 1.4 * i / 7);
  bc.draws = 800;
  const GridFit gf = fit_grid(s, F, cfg, bc.grid);
  REQUIRE(!gf.inference.empty());
  const BandResult band = confidence_band(s, F, gf, bc);
  for (size_t i = 0; i < band.x.size(); ++i)
    CHECK(band.se[i] == doctest::Approx(gf.inference[i].se(0)));
}
