#include "lrd/fit.hpp"

#include <algorithm>
#include <cmath>

#include "lrd/normal.hpp"
#include "lrd/simd.hpp"

namespace lrd {

namespace {

constexpr double kCondLimit = 1e12;

struct Window {
  int i0 = 0, i1 = 0;        // sorted-index range with |x_i - x| <= h
  std::vector<double> u, w;  // normalized coordinates and kernel weights
  int size() const { return i1 - i0; }
};

Window make_window(const SortedSample& s, const FitConfig& cfg, double x) {
  Window win;
  const auto& v = s.values;
  win.i0 = static_cast<int>(std::lower_bound(v.begin(), v.end(), x - cfg.h) - v.begin());
  win.i1 = static_cast<int>(std::upper_bound(v.begin(), v.end(), x + cfg.h) - v.begin());
  const int m = win.size();
  win.u.resize(m);
  win.w.resize(m);
  if (m > 0)
    kernel_weights(cfg.kernel.kind, v.data() + win.i0, m, x, cfg.h, win.u.data(), win.w.data());
  return win;
}

Eigen::MatrixXd gram_from_window(const Window& win, const BasisSpec& basis, int n) {
  const int d = basis.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < win.size(); ++k) {
    const Eigen::VectorXd r = basis_eval(basis, win.u[k]);
    g.selfadjointView<Eigen::Lower>().rankUpdate(r, win.w[k] / n);
  }
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

// Suffix sums S_k = (1/n) sum_{j >= k, local} W_j R_j plus the fixed vector
// T = (1/n) sum_j W_j R_j Fhat_j, and the rank index k(i) = first local slot
// whose value is >= x_i.  psi_i = w_i S_{k(i)} - T, which makes each psi a
// cheap lookup: O(n + n_local * dim) total per evaluation point.
struct PsiCore {
  Eigen::MatrixXd suffix;  // (m+1) x dim, last row zero
  Eigen::VectorXd tvec;
  std::vector<int> k_of_i;  // size n
};

PsiCore psi_core(const SortedSample& s, const EdfValues& F, const Window& win,
                 const BasisSpec& basis) {
  const int n = s.n(), m = win.size(), d = basis.dim();
  PsiCore c;
  c.suffix = Eigen::MatrixXd::Zero(m + 1, d);
  c.tvec = Eigen::VectorXd::Zero(d);
  for (int k = m - 1; k >= 0; --k) {
    const Eigen::VectorXd r = basis_eval(basis, win.u[k]) * (win.w[k] / n);
    c.suffix.row(k) = c.suffix.row(k + 1) + r.transpose();
    c.tvec += r * F.values[win.i0 + k];
  }
  c.k_of_i.resize(n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    while (k < m && s.values[win.i0 + k] < s.values[i]) ++k;
    c.k_of_i[i] = k;
  }
  return c;
}

Eigen::MatrixXd sigma_from_core(const SortedSample& s, const PsiCore& c) {
  const int n = s.n();
  const int d = static_cast<int>(c.tvec.size());
  const int m = static_cast<int>(c.suffix.rows()) - 1;
  // Group observations sharing the same suffix row: per row accumulate sum of
  // sample weights and of squared weights, then expand the quadratic form.
  Eigen::VectorXd sw = Eigen::VectorXd::Zero(m + 1), sw2 = Eigen::VectorXd::Zero(m + 1);
  for (int i = 0; i < n; ++i) {
    const double wi = s.weights[i];
    sw(c.k_of_i[i]) += wi;
    sw2(c.k_of_i[i]) += wi * wi;
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  for (int k = 0; k <= m; ++k) {
    if (sw(k) == 0.0 && sw2(k) == 0.0) continue;
    const Eigen::VectorXd sk = c.suffix.row(k).transpose();
    a.selfadjointView<Eigen::Lower>().rankUpdate(sk, sw2(k));
    v += sw(k) * sk;
  }
  a.triangularView<Eigen::StrictlyUpper>() = a.transpose();
  Eigen::MatrixXd sig =
      (a - v * c.tvec.transpose() - c.tvec * v.transpose() + n * c.tvec * c.tvec.transpose()) /
      (static_cast<double>(n) * n);
  return sig;
}

// Symmetric solve with an explicit conditioning guard.
struct GramSolver {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  explicit GramSolver(const Eigen::MatrixXd& g) : eig(g) {
    const auto& ev = eig.eigenvalues();
    const double emax = ev.cwiseAbs().maxCoeff();
    const double emin = ev.minCoeff();
    if (!(emin > 0.0) || emax / emin > kCondLimit)
      throw SingularGram("local Gram matrix singular or ill-conditioned");
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    return eig.eigenvectors() *
           (eig.eigenvalues().cwiseInverse().asDiagonal() *
            (eig.eigenvectors().transpose() * rhs));
  }
  Eigen::MatrixXd inverse() const {
    return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
           eig.eigenvectors().transpose();
  }
};

void finish_point(PointFit& fit, const SortedSample& s, const EdfValues& F, const Window& win,
                  const GramSolver& solver, const FitConfig& cfg) {
  const PsiCore core = psi_core(s, F, win, cfg.basis);
  fit.sigma = sigma_from_core(s, core);
  const Eigen::MatrixXd ginv = solver.inverse();
  fit.omega = ginv * fit.sigma * ginv;
  fit.coeff_map = coefficient_map(cfg.basis);
  fit.upsilon = scaling_matrix(cfg.basis, cfg.h);
  fit.theta = fit.upsilon.asDiagonal() * (fit.coeff_map * fit.b);
}

}  // namespace

Eigen::MatrixXd PointFit::omega_data() const {
  const Eigen::MatrixXd ul = upsilon.asDiagonal() * coeff_map;
  return ul * omega * ul.transpose();
}

double PointFit::estimate(int deriv) const { return theta(basis.coeff_index(deriv)); }

double PointFit::variance(int deriv) const {
  const int idx = basis.coeff_index(deriv);
  const Eigen::VectorXd c = upsilon(idx) * coeff_map.row(idx).transpose();
  return c.dot(omega * c);
}

double PointFit::se(int deriv) const {
  const double v = variance(deriv);
  if (!(v > 0.0) || !std::isfinite(v)) throw DegenerateVariance("nonpositive variance estimate");
  return std::sqrt(v);
}

Eigen::MatrixXd gamma_hat(const SortedSample& s, const FitConfig& cfg, double x) {
  if (!(cfg.h > 0)) throw InvalidInput("bandwidth must be positive");
  return gram_from_window(make_window(s, cfg, x), cfg.basis, s.n());
}

PointFit fit_point(const SortedSample& s, const EdfValues& F, const FitConfig& cfg, double x) {
  if (!(cfg.h > 0)) throw InvalidInput("bandwidth must be positive");
  if (static_cast<int>(F.values.size()) != s.n()) throw InvalidInput("EDF/sample size mismatch");
  PointFit fit;
  fit.x = x;
  fit.h = cfg.h;
  fit.basis = cfg.basis;
  fit.n = s.n();
  const Window win = make_window(s, cfg, x);
  fit.n_local = win.size();
  const int d = cfg.basis.dim();
  if (fit.n_local < d) throw InsufficientLocalData("fewer local observations than regressors");
  fit.gamma = gram_from_window(win, cfg.basis, s.n());
  GramSolver solver(fit.gamma);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < win.size(); ++k)
    rhs += basis_eval(cfg.basis, win.u[k]) * (win.w[k] / s.n()) * F.values[win.i0 + k];
  fit.b = solver.solve(rhs);
  finish_point(fit, s, F, win, solver, cfg);
  return fit;
}

Eigen::MatrixXd psi_hat_all(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                            double x) {
  const Window win = make_window(s, cfg, x);
  const PsiCore core = psi_core(s, F, win, cfg.basis);
  const int n = s.n();
  Eigen::MatrixXd psi(n, cfg.basis.dim());
  for (int i = 0; i < n; ++i)
    psi.row(i) = s.weights[i] * core.suffix.row(core.k_of_i[i]) - core.tvec.transpose();
  return psi;
}

Eigen::MatrixXd sigma_hat(const Eigen::MatrixXd& psi) {
  const double n = static_cast<double>(psi.rows());
  return psi.transpose() * psi / (n * n);
}

Eigen::VectorXd influence_scalars(const SortedSample& s, const EdfValues& F,
                                  const FitConfig& cfg, double x, const Eigen::VectorXd& c) {
  const Window win = make_window(s, cfg, x);
  if (win.size() < cfg.basis.dim())
    throw InsufficientLocalData("fewer local observations than regressors");
  const Eigen::MatrixXd gamma = gram_from_window(win, cfg.basis, s.n());
  GramSolver solver(gamma);
  const Eigen::VectorXd g = solver.solve(c);
  const PsiCore core = psi_core(s, F, win, cfg.basis);
  const Eigen::VectorXd proj = core.suffix * g;  // (m+1)
  const double tproj = core.tvec.dot(g);
  const int n = s.n();
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = s.weights[i] * proj(core.k_of_i[i]) - tproj;
  return out;
}

Interval ci_pointwise(const PointFit& fit, int deriv, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("alpha outside (0, 1]");
  Interval ci;
  ci.center = fit.estimate(deriv);
  const double v = fit.variance(deriv);
  if (!(v >= 0.0) || !std::isfinite(v) ||
      (v <= 1e-14 * std::max(1.0, ci.center * ci.center) && alpha < 1.0))
    throw DegenerateVariance("variance estimate degenerate");
  ci.se = std::sqrt(v);
  const double z = alpha == 1.0 ? 0.0 : normal_quantile(1.0 - alpha / 2.0);
  ci.lo = ci.center - z * ci.se;
  ci.hi = ci.center + z * ci.se;
  return ci;
}

GridFit fit_grid(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                 const std::vector<double>& grid) {
  GridFit out;
  out.cfg = cfg;
  int failed = 0;
  auto one = [&](const FitConfig& c, double x) {
    try {
      return fit_point(s, F, c, x);
    } catch (const Error& e) {
      PointFit bad;
      bad.x = x;
      bad.h = c.h;
      bad.basis = c.basis;
      bad.n = s.n();
      bad.ok = false;
      bad.flag = e.what();
      return bad;
    }
  };
  for (double x : grid) {
    out.fits.push_back(one(cfg, x));
    if (!out.fits.back().ok) ++failed;
    if (cfg.inference_basis) {
      FitConfig icfg = cfg;
      icfg.basis = *cfg.inference_basis;
      icfg.inference_basis.reset();
      out.inference.push_back(one(icfg, x));
    }
  }
  if (!grid.empty() && failed == static_cast<int>(grid.size()))
    throw InsufficientLocalData("all grid points failed to fit");
  return out;
}

PointFit fit_point_constrained(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                               double x, const Eigen::VectorXd& a, double bound) {
  PointFit fit = fit_point(s, F, cfg, x);
  if (a.dot(fit.theta) >= bound) return fit;
  // Active constraint: equality-constrained WLS via one KKT multiplier,
  // stated in normalized coordinates (a' theta = a' U L b).
  const int d = cfg.basis.dim();
  const Eigen::MatrixXd ul = fit.upsilon.asDiagonal() * fit.coeff_map;
  const Eigen::VectorXd at = ul.transpose() * a;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(d + 1, d + 1);
  kkt.topLeftCorner(d, d) = fit.gamma;
  kkt.block(0, d, d, 1) = at;
  kkt.block(d, 0, 1, d) = at.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs.head(d) = fit.gamma * fit.b;  // X'Wy/n reconstructed from the solve
  rhs(d) = bound;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible()) throw SingularBlock("constraint row in null space of Gram matrix");
  const Eigen::VectorXd sol = lu.solve(rhs);
  fit.b = sol.head(d);
  fit.theta = ul * fit.b;
  return fit;
}

}  // namespace lrd
