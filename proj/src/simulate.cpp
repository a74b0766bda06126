#include "lrd/simulate.hpp"

#include <cmath>

#include "lrd/bandwidth.hpp"
#include "lrd/normal.hpp"
#include "lrd/mindist.hpp"
#include "lrd/quadrature.hpp"

namespace lrd {

namespace {

double truth_deriv(const DgpSpec& dgp, double x, int deriv) {
  if (deriv == -1) return dgp.cdf(x);
  if (deriv == 0) return dgp.pdf(x);
  if (deriv == 1) return dgp.dpdf_right(x);
  throw InvalidInput("no closed-form truth for this derivative order");
}

double fit_bandwidth(const SortedSample& s, const FitConfig& cfg) {
  if (cfg.h > 0) return cfg.h;
  return rot_bandwidth(s, cfg.basis.p, std::max(cfg.deriv, 0), cfg.kernel);
}

}  // namespace

double DgpSpec::cdf(double x) const {
  switch (kind) {
    case Kind::gaussian:
      return normal_cdf((x - mu) / sigma);
    case Kind::exponential:
      return x <= 0 ? 0.0 : 1.0 - std::exp(-rate * x);
    case Kind::uniform:
      return x <= a ? 0.0 : (x >= b ? 1.0 : (x - a) / (b - a));
    case Kind::kinked:
      if (x <= -1) return 0.0;
      if (x >= 1) return 1.0;
      return x < 0 ? 0.5 + 0.25 * x - 0.25 * x * x : 0.5 + 0.25 * x + 0.25 * x * x;
  }
  return 0.0;
}

double DgpSpec::pdf(double x) const {
  switch (kind) {
    case Kind::gaussian: {
      const double z = (x - mu) / sigma;
      return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
    }
    case Kind::exponential:
      return x < 0 ? 0.0 : rate * std::exp(-rate * x);
    case Kind::uniform:
      return (x < a || x > b) ? 0.0 : 1.0 / (b - a);
    case Kind::kinked:
      if (x < -1 || x > 1) return 0.0;
      return 0.25 + 0.5 * std::abs(x);
  }
  return 0.0;
}

double DgpSpec::dpdf_left(double x) const {
  if (kind == Kind::kinked) {
    if (x < -1 || x > 1) return 0.0;
    return x <= 0 ? -0.5 : 0.5;
  }
  return dpdf_right(x);
}

double DgpSpec::dpdf_right(double x) const {
  switch (kind) {
    case Kind::gaussian: {
      const double z = (x - mu) / sigma;
      return -z / sigma * pdf(x);
    }
    case Kind::exponential:
      return x < 0 ? 0.0 : -rate * rate * std::exp(-rate * x);
    case Kind::uniform:
      return 0.0;
    case Kind::kinked:
      if (x < -1 || x > 1) return 0.0;
      return x < 0 ? -0.5 : 0.5;
  }
  return 0.0;
}

double DgpSpec::quantile(double u) const {
  switch (kind) {
    case Kind::gaussian:
      return mu + sigma * normal_quantile(u);
    case Kind::exponential:
      return -std::log(1.0 - u) / rate;
    case Kind::uniform:
      return a + (b - a) * u;
    case Kind::kinked:
      return u < 0.5 ? 0.5 * (1.0 - std::sqrt(9.0 - 16.0 * u))
                     : 0.5 * (-1.0 + std::sqrt(16.0 * u - 7.0));
  }
  return 0.0;
}

std::pair<double, double> DgpSpec::support() const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case Kind::gaussian:
      return {-inf, inf};
    case Kind::exponential:
      return {0.0, inf};
    case Kind::uniform:
      return {a, b};
    case Kind::kinked:
      return {-1.0, 1.0};
  }
  return {-inf, inf};
}

std::vector<double> DgpSpec::sample(int n, std::uint64_t seed, std::uint64_t rep) const {
  NormalSampler gen(rng_stream(seed, rep));
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double u;
    do {
      u = gen.uniform();
    } while (u <= 0.0 || u >= 1.0);
    out[i] = quantile(u);
  }
  return out;
}

ExperimentResult run_pointwise_coverage(const DgpSpec& dgp, int n, int reps,
                                        const FitConfig& cfg, double x, double alpha,
                                        std::uint64_t seed) {
  ExperimentResult res;
  res.reps = reps;
  res.seed = seed;
  const double truth = truth_deriv(dgp, x, cfg.deriv);
  int covered = 0;
  double sum_est = 0.0, sum_sq = 0.0, sum_se = 0.0;
  for (int r = 0; r < reps; ++r) {
    const SortedSample s = sort_sample(dgp.sample(n, seed, r));
    const EdfValues F = edf_at_points(s);
    FitConfig c = cfg;
    c.h = fit_bandwidth(s, cfg);
    const PointFit point = fit_point(s, F, c, x);
    Interval ci;
    if (cfg.inference_basis) {
      FitConfig ic = c;
      ic.basis = *cfg.inference_basis;
      ic.inference_basis.reset();
      ci = ci_pointwise(fit_point(s, F, ic, x), cfg.deriv, alpha);
    } else {
      ci = ci_pointwise(point, cfg.deriv, alpha);
    }
    if (alpha < 1.0 && ci.lo <= truth && truth <= ci.hi) ++covered;
    const double est = point.estimate(cfg.deriv);
    sum_est += est;
    sum_sq += est * est;
    sum_se += ci.se;
  }
  res.coverage = static_cast<double>(covered) / reps;
  const double mean = sum_est / reps;
  res.mean_bias = mean - truth;
  res.sd = std::sqrt(std::max(0.0, sum_sq / reps - mean * mean));
  res.mean_se = sum_se / reps;
  return res;
}

ExperimentResult run_uniform_coverage(const DgpSpec& dgp, int n, int reps, const FitConfig& cfg,
                                      const BandConfig& band_cfg, std::uint64_t seed) {
  ExperimentResult res;
  res.reps = reps;
  res.seed = seed;
  const double z = normal_quantile(1.0 - band_cfg.alpha / 2.0);
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    const SortedSample s = sort_sample(dgp.sample(n, seed, r));
    const EdfValues F = edf_at_points(s);
    FitConfig c = cfg;
    c.h = fit_bandwidth(s, cfg);
    const GridFit gf = fit_grid(s, F, c, band_cfg.grid);
    BandConfig bc = band_cfg;
    bc.seed = splitmix64(seed ^ 0x5eedba5eULL) + r;
    const BandResult band = confidence_band(s, F, gf, bc);
    if (band.quantile < z) res.all_q_ge_z = false;
    bool all_in = true;
    for (size_t g = 0; g < bc.grid.size(); ++g) {
      const double truth = truth_deriv(dgp, bc.grid[g], bc.deriv);
      if (truth < band.lo[g] || truth > band.hi[g]) {
        all_in = false;
        break;
      }
    }
    if (all_in) ++covered;
  }
  res.coverage = static_cast<double>(covered) / reps;
  return res;
}

std::vector<EfficiencyRow> run_efficiency(const DgpSpec& dgp, int n, int reps, int p, int ell,
                                          const std::vector<int>& j_list, double x,
                                          std::uint64_t seed, double h) {
  FitConfig base;
  base.kernel.kind = KernelKind::uniform;
  base.basis.p = p;
  base.deriv = ell;
  base.h = h;
  std::vector<std::vector<double>> estimates(1 + j_list.size());
  for (int r = 0; r < reps; ++r) {
    const SortedSample s = sort_sample(dgp.sample(n, seed, r));
    const EdfValues F = edf_at_points(s);
    FitConfig c = base;
    c.h = fit_bandwidth(s, base);
    const double scale = std::sqrt(n * std::pow(c.h, 2 * ell + 1));
    estimates[0].push_back(scale * fit_point(s, F, c, x).estimate(ell));
    for (size_t q = 0; q < j_list.size(); ++q) {
      FitConfig cq = c;
      cq.basis.redundant = RedundantSpec{j_list[q],
                                         ell % 2 == 0 ? RedundantSpec::Parity::odd
                                                      : RedundantSpec::Parity::even,
                                         false};
      const PointFit fq = fit_point(s, F, cq, x);
      const BlockEstimate md = md_estimate(fq, default_partition(cq.basis));
      estimates[1 + q].push_back(scale * md.theta1(cq.basis.coeff_index(ell)));
    }
  }
  std::vector<EfficiencyRow> rows;
  for (size_t q = 0; q < estimates.size(); ++q) {
    EfficiencyRow row;
    row.j = q == 0 ? 0 : j_list[q - 1];
    double m = 0.0, ss = 0.0;
    for (double e : estimates[q]) m += e;
    m /= reps;
    for (double e : estimates[q]) ss += (e - m) * (e - m);
    row.mc_mean = m;
    row.mc_variance = ss / (reps - 1);
    rows.push_back(row);
  }
  return rows;
}

double linearized_process_eval(const DgpSpec& dgp, const FitConfig& cfg, double x,
                               const std::vector<double>& sample) {
  const double h = cfg.h;
  if (!(h > 0)) throw InvalidInput("bandwidth must be positive");
  const auto sup = dgp.support();
  const double lo = std::max(-1.0, (sup.first - x) / h);
  const double hi = std::min(1.0, (sup.second - x) / h);
  if (!(hi > lo)) throw InvalidInput("evaluation point outside support window");
  const BasisSpec& b = cfg.basis;
  const int d = b.dim();
  const int order = 48;
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(d, d);
  quad::foreach_node_breaks(lo, hi, {0.0}, order, [&](double u, double w) {
    const Eigen::VectorXd r = basis_eval(b, u);
    gamma += (w * kernel_eval(cfg.kernel, u) * dgp.pdf(x + h * u)) * r * r.transpose();
  });
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
  quad::foreach_node_breaks(lo, hi, {0.0}, order, [&](double u, double wu) {
    const Eigen::VectorXd ru =
        basis_eval(b, u) * (wu * kernel_eval(cfg.kernel, u) * dgp.pdf(x + h * u));
    Eigen::VectorXd inner = Eigen::VectorXd::Zero(d);
    quad::foreach_node_breaks(lo, hi, {0.0, u}, order, [&](double v, double wv) {
      const double cov = dgp.cdf(x + h * std::min(u, v)) - dgp.cdf(x + h * u) * dgp.cdf(x + h * v);
      inner += (wv * kernel_eval(cfg.kernel, v) * dgp.pdf(x + h * v) * cov) * basis_eval(b, v);
    });
    sigma += ru * inner.transpose();
  });
  sigma = 0.5 * (sigma + sigma.transpose());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gamma);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
  e(b.coeff_index(cfg.deriv)) = 1.0;
  const Eigen::VectorXd g = ldlt.solve(e);
  const double denom = std::sqrt(g.dot(sigma * g));
  if (!(denom > 0)) throw DegenerateVariance("degenerate linearized variance");
  double total = 0.0;
  for (double xi : sample) {
    const double w0 = (xi - x) / h;
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    quad::foreach_node_breaks(lo, hi, {0.0, w0}, order, [&](double u, double w) {
      const double ind = (w0 <= u) ? 1.0 : 0.0;
      m += (w * kernel_eval(cfg.kernel, u) * dgp.pdf(x + h * u) *
            (ind - dgp.cdf(x + h * u))) *
           basis_eval(b, u);
    });
    total += g.dot(m) / denom;
  }
  return total / std::sqrt(static_cast<double>(sample.size()));
}

}  // namespace lrd
