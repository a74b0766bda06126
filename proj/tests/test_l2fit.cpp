#include <doctest.h>

#include <cmath>

#include "lrd/l2fit.hpp"
#include "lrd/mindist.hpp"
#include "lrd/quadrature.hpp"
#include "lrd/rng.hpp"

using namespace lrd;

namespace {

std::vector<double> uniform01_sample(int n, std::uint64_t seed) {
  NormalSampler gen(rng_stream(seed, 0));
  std::vector<double> x(n);
  for (double& v : x) v = gen.uniform();
  return x;
}

}  // namespace

TEST_CASE("empirical design reproduces the local regression estimator") {
  NormalSampler gen(rng_stream(17, 0));
  std::vector<double> x(500);
  for (double& v : x) v = gen();
  const SortedSample s = sort_sample(x);
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.8;
  DesignSpec design;
  design.kind = DesignSpec::Kind::empirical;
  const PointFit a = l2_fit_point(s, F, cfg, design, 0.2);
  const PointFit b = fit_point(s, F, cfg, 0.2);
  CHECK((a.theta - b.theta).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Lebesgue design recovers a known density in the mean") {
  // average over replications: the estimator targets f = 1 on [0, 1]
  double mean = 0.0;
  const int reps = 40, n = 800;
  for (int r = 0; r < reps; ++r) {
    const SortedSample s = sort_sample(uniform01_sample(n, 100 + r));
    const EdfValues F = edf_at_points(s);
    FitConfig cfg;
    cfg.basis.p = 2;
    cfg.h = 0.25;
    DesignSpec design;
    design.kind = DesignSpec::Kind::lebesgue;
    design.support = std::make_pair(0.0, 1.0);
    mean += l2_fit_point(s, F, cfg, design, 0.5).estimate(0);
  }
  mean /= reps;
  CHECK(std::abs(mean - 1.0) < 0.05);
}

TEST_CASE("fixed designs stay finite where the local regression gives up") {
  // one observation near x: the window Gram from data is singular, the
  // design Gram is not
  const SortedSample s = sort_sample({0.5, 3.0, 3.1, 3.2, 3.3});
  const EdfValues F = edf_at_points(s);
  FitConfig cfg;
  cfg.basis.p = 2;
  cfg.h = 0.3;
  CHECK_THROWS_AS(fit_point(s, F, cfg, 0.5), InsufficientLocalData);
  DesignSpec design;
  design.kind = DesignSpec::Kind::lebesgue;
  design.support = std::make_pair(0.0, 4.0);
  const PointFit fit = l2_fit_point(s, F, cfg, design, 0.5);
  CHECK(std::isfinite(fit.estimate(0)));
}

TEST_CASE("plug-in variance equals a direct dense quadrature oracle") {
  const SortedSample s = sort_sample(uniform01_sample(25, 7));
  FitConfig cfg;
  cfg.basis.p = 1;
  cfg.kernel.kind = KernelKind::triangular;
  cfg.h = 0.3;
  DesignSpec design;
  design.kind = DesignSpec::Kind::lebesgue;
  design.support = std::make_pair(0.0, 1.0);
  const double x = 0.45;
  const Eigen::MatrixXd got = l2_sigma_hat(s, cfg, design, x);

  const int n = s.n(), d = cfg.basis.dim();
  const double lo = std::max(-1.0, (0.0 - x) / cfg.h), hi = std::min(1.0, (1.0 - x) / cfg.h);
  std::vector<double> breaks{0.0};
  for (double v : s.values)
    if ((v - x) / cfg.h > lo && (v - x) / cfg.h < hi) breaks.push_back((v - x) / cfg.h);
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd xi = Eigen::VectorXd::Zero(d);
    std::vector<double> bi = breaks;
    bi.push_back((s.values[i] - x) / cfg.h);
    quad::foreach_node_breaks(lo, hi, bi, 32, [&](double v, double w) {
      const double ind = s.values[i] <= x + cfg.h * v ? s.weights[i] : 0.0;
      xi += (w * kernel_eval(cfg.kernel, v)) * (ind - edf_eval(s, x + cfg.h * v)) *
            basis_eval(cfg.basis, v);
    });
    want += xi * xi.transpose();
  }
  want /= n;
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, want.norm()));
}

TEST_CASE("single observation: centering collapses the variance to zero") {
  const SortedSample s = sort_sample({0.5});
  FitConfig cfg;
  cfg.basis.p = 1;
  cfg.h = 0.4;
  DesignSpec design;
  design.kind = DesignSpec::Kind::lebesgue;
  design.support = std::make_pair(0.0, 1.0);
  CHECK(l2_sigma_hat(s, cfg, design, 0.5).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("numerical-derivative estimator: p=1 uniform kernel is the plain KDE") {
  NormalSampler gen(rng_stream(23, 0));
  std::vector<double> x(300);
  for (double& v : x) v = gen();
  const SortedSample s = sort_sample(x);
  FitConfig cfg;
  cfg.basis.p = 1;
  cfg.kernel.kind = KernelKind::uniform;
  cfg.h = 0.5;
  const Eigen::VectorXd est = nd_estimate(s, cfg, {-10.0, 10.0}, 0.0);
  int inside = 0;
  for (double v : s.values) inside += std::abs(v) <= cfg.h;
  CHECK(est(0) == doctest::Approx(inside / (2.0 * cfg.h * s.n())).epsilon(1e-10));
}

TEST_CASE("ND sandwich equals the efficiency bound for the uniform kernel") {
  for (int p = 1; p <= 5; ++p)
    for (int ell = 0; ell < p; ++ell)
      CHECK(nd_sandwich_variance(p, ell, {KernelKind::uniform}) ==
            doctest::Approx(variance_bound(p, ell)).epsilon(1e-10));
}

TEST_CASE("support is required for non-empirical designs") {
  const SortedSample s = sort_sample(uniform01_sample(50, 9));
  FitConfig cfg;
  cfg.h = 0.2;
  DesignSpec design;
  design.kind = DesignSpec::Kind::lebesgue;
  CHECK_THROWS_AS(l2_fit_point(s, edf_at_points(s), cfg, design, 0.5), InvalidInput);
}
