#include "lrd/l2fit.hpp"

#include <algorithm>
#include <cmath>

#include "lrd/quadrature.hpp"

namespace lrd {

namespace {

constexpr int kOrder = 32;
constexpr double kCondLimit = 1e12;

double design_density(const DesignSpec& d, double u) {
  switch (d.kind) {
    case DesignSpec::Kind::lebesgue:
      return 1.0;
    case DesignSpec::Kind::known_density:
      if (!d.g) throw InvalidInput("known-density design without a density");
      return d.g(u);
    case DesignSpec::Kind::empirical:
      throw InvalidInput("empirical design has no Lebesgue density");
  }
  return 1.0;
}

// Normalized integration region and the data points falling inside it.
struct Region {
  double lo, hi;            // in v = (u - x)/h units
  std::vector<double> breaks;  // data locations (and 0) as panel boundaries
};

Region make_region(const SortedSample& s, double x, double h,
                   std::pair<double, double> support, bool with_data_breaks) {
  Region r;
  r.lo = std::max(-1.0, (support.first - x) / h);
  r.hi = std::min(1.0, (support.second - x) / h);
  if (!(r.hi > r.lo)) throw InvalidInput("evaluation point outside design support window");
  r.breaks.push_back(0.0);
  if (with_data_breaks) {
    auto lo_it = std::lower_bound(s.values.begin(), s.values.end(), x + r.lo * h);
    auto hi_it = std::upper_bound(s.values.begin(), s.values.end(), x + r.hi * h);
    for (auto it = lo_it; it != hi_it; ++it) r.breaks.push_back((*it - x) / h);
  }
  return r;
}

Eigen::MatrixXd safe_inverse(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const auto& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > kCondLimit)
    throw SingularGram(what);
  return eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

PointFit l2_fit_point(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                      const DesignSpec& design, double x) {
  if (cfg.basis.split_at_zero) throw InvalidInput("split basis unsupported for L2 fit");
  if (design.kind == DesignSpec::Kind::empirical) {
    // dG = dFhat turns both integrals into the local-regression sums.
    return fit_point(s, F, cfg, x);
  }
  if (!design.support) throw InvalidInput("non-empirical design requires a support interval");
  if (!(cfg.h > 0)) throw InvalidInput("bandwidth must be positive");
  const int n = s.n(), d = cfg.basis.dim();
  const Region reg = make_region(s, x, cfg.h, *design.support, true);

  PointFit fit;
  fit.x = x;
  fit.h = cfg.h;
  fit.basis = cfg.basis;
  fit.n = n;
  {
    auto lo_it = std::lower_bound(s.values.begin(), s.values.end(), x - cfg.h);
    auto hi_it = std::upper_bound(s.values.begin(), s.values.end(), x + cfg.h);
    fit.n_local = static_cast<int>(hi_it - lo_it);
  }
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd num = Eigen::VectorXd::Zero(d);
  quad::foreach_node_breaks(reg.lo, reg.hi, reg.breaks, kOrder, [&](double v, double w) {
    const double kg = w * kernel_eval(cfg.kernel, v) * design_density(design, x + cfg.h * v);
    const Eigen::VectorXd r = basis_eval(cfg.basis, v);
    gamma += kg * r * r.transpose();
    num += kg * edf_eval(s, x + cfg.h * v) * r;
  });
  fit.gamma = gamma;
  const Eigen::MatrixXd gi = safe_inverse(gamma, "L2 design Gram singular");
  fit.b = gi * num;
  fit.sigma = l2_sigma_hat(s, cfg, design, x) / n;
  fit.omega = gi * fit.sigma * gi;
  fit.coeff_map = coefficient_map(cfg.basis);
  fit.upsilon = scaling_matrix(cfg.basis, cfg.h);
  fit.theta = fit.upsilon.asDiagonal() * (fit.coeff_map * fit.b);
  return fit;
}

Eigen::MatrixXd l2_sigma_hat(const SortedSample& s, const FitConfig& cfg,
                             const DesignSpec& design, double x) {
  if (!design.support) throw InvalidInput("non-empirical design requires a support interval");
  const int n = s.n(), d = cfg.basis.dim();
  const Region reg = make_region(s, x, cfg.h, *design.support, true);

  // Suffix integrals A(w) = int_{v >= w} R K g dv at every data location in
  // the window, plus the fixed vector m_F = int R Fhat K g dv; then
  // xi_i = w_i A(w_i) - m_F, constant across the three i-regimes outside.
  Eigen::VectorXd m_f = Eigen::VectorXd::Zero(d);
  quad::foreach_node_breaks(reg.lo, reg.hi, reg.breaks, kOrder, [&](double v, double w) {
    const double kg = w * kernel_eval(cfg.kernel, v) * design_density(design, x + cfg.h * v);
    m_f += kg * edf_eval(s, x + cfg.h * v) * basis_eval(cfg.basis, v);
  });
  auto suffix = [&](double w0) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
    if (w0 >= reg.hi) return a;
    quad::foreach_node_breaks(std::max(w0, reg.lo), reg.hi, reg.breaks, kOrder,
                              [&](double v, double w) {
                                a += (w * kernel_eval(cfg.kernel, v) *
                                      design_density(design, x + cfg.h * v)) *
                                     basis_eval(cfg.basis, v);
                              });
    return a;
  };
  const Eigen::VectorXd a_full = suffix(reg.lo);
  Eigen::MatrixXd sig = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd prev_a;
  double prev_w = 0.0;
  bool have_prev = false;
  for (int i = 0; i < n; ++i) {
    const double wi = (s.values[i] - x) / cfg.h;
    Eigen::VectorXd a;
    if (wi <= reg.lo)
      a = a_full;
    else if (wi >= reg.hi)
      a = Eigen::VectorXd::Zero(d);
    else if (have_prev && wi == prev_w)
      a = prev_a;
    else
      a = suffix(wi);
    prev_a = a;
    prev_w = wi;
    have_prev = true;
    const Eigen::VectorXd xi = s.weights[i] * a - m_f;
    sig += xi * xi.transpose();
  }
  return sig / n;
}

Eigen::VectorXd nd_estimate(const SortedSample& s, const FitConfig& cfg,
                            std::pair<double, double> support, double x) {
  const int p = cfg.basis.p;
  if (p < 1) throw InvalidInput("numerical-derivative estimator needs p >= 1");
  if (!(cfg.h > 0)) throw InvalidInput("bandwidth must be positive");
  const Region reg = make_region(s, x, cfg.h, support, false);
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(p, p);
  quad::foreach_node_breaks(reg.lo, reg.hi, reg.breaks, kOrder, [&](double v, double w) {
    const Eigen::VectorXd r = derivative_basis(p, v);
    gamma += (w * kernel_eval(cfg.kernel, v)) * r * r.transpose();
  });
  const Eigen::MatrixXd gi = safe_inverse(gamma, "ND Gram singular");
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
  auto lo_it = std::lower_bound(s.values.begin(), s.values.end(), x - cfg.h);
  auto hi_it = std::upper_bound(s.values.begin(), s.values.end(), x + cfg.h);
  for (auto it = lo_it; it != hi_it; ++it) {
    const double u = (*it - x) / cfg.h;
    const int i = static_cast<int>(it - s.values.begin());
    sum += s.weights[i] * kernel_eval(cfg.kernel, u) * derivative_basis(p, u);
  }
  Eigen::VectorXd b = gi * (sum / (s.n() * cfg.h));
  for (int l = 0; l < p; ++l) b(l) *= std::pow(cfg.h, -l);
  return b;
}

double nd_sandwich_variance(int p, int ell, const KernelSpec& k, double lo, double hi) {
  if (ell < 0 || ell > p - 1) throw InvalidInput("derivative order outside [0, p-1]");
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(p, p);
  Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(p, p);
  quad::foreach_node_breaks(lo, hi, {0.0}, 64, [&](double v, double w) {
    const Eigen::VectorXd r = derivative_basis(p, v);
    const double kv = kernel_eval(k, v);
    gamma += (w * kv) * r * r.transpose();
    bmat += (w * kv * kv) * r * r.transpose();
  });
  const Eigen::MatrixXd gi = safe_inverse(gamma, "ND Gram singular");
  return (gi * bmat * gi)(ell, ell);
}

}  // namespace lrd
