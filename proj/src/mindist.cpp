#include "lrd/mindist.hpp"

#include <cmath>

#include "lrd/quadrature.hpp"

namespace lrd {

namespace {

constexpr int kOrder = 80;  // exact for polynomial integrands up to degree 159
constexpr double kCondLimit = 1e12;

Eigen::MatrixXd safe_inverse(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const auto& ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() / ev.minCoeff() > kCondLimit)
    throw SingularBlock(what);
  return eig.eigenvectors() * ev.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const std::vector<int>& r,
                          const std::vector<int>& c) {
  Eigen::MatrixXd out(r.size(), c.size());
  for (size_t i = 0; i < r.size(); ++i)
    for (size_t j = 0; j < c.size(); ++j) out(i, j) = m(r[i], c[j]);
  return out;
}

Eigen::VectorXd subvector(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

// Population Gamma = int R R' K over [lo, hi].
Eigen::MatrixXd pop_gamma(const BasisSpec& b, const KernelSpec& k, double lo, double hi) {
  const int d = b.dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  quad::foreach_node_breaks(lo, hi, {0.0}, kOrder, [&](double u, double w) {
    const Eigen::VectorXd r = basis_eval(b, u);
    g += (w * kernel_eval(k, u)) * r * r.transpose();
  });
  return g;
}

// Population Sigma = iint min(u,v) R(u) R(v)' K(u) K(v) over [lo, hi]^2.
// Inner integral split at the diagonal so each panel is polynomial.
Eigen::MatrixXd pop_sigma(const BasisSpec& b, const KernelSpec& k, double lo, double hi) {
  const int d = b.dim();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(d, d);
  quad::foreach_node_breaks(lo, hi, {0.0}, kOrder, [&](double u, double wu) {
    const Eigen::VectorXd ru = basis_eval(b, u) * (wu * kernel_eval(k, u));
    Eigen::VectorXd inner = Eigen::VectorXd::Zero(d);
    quad::foreach_node_breaks(lo, hi, {0.0, u}, kOrder, [&](double v, double wv) {
      inner += (wv * std::min(u, v) * kernel_eval(k, v)) * basis_eval(b, v);
    });
    s += ru * inner.transpose();
  });
  return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd pop_omega(const BasisSpec& b, const KernelSpec& k, double lo, double hi) {
  const Eigen::MatrixXd gi = safe_inverse(pop_gamma(b, k, lo, hi), "population Gram singular");
  return gi * pop_sigma(b, k, lo, hi) * gi;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Partition default_partition(const BasisSpec& b) {
  if (!b.has_redundant()) throw InvalidInput("basis has no redundant regressor to partition");
  Partition part;
  for (int i = 0; i < b.dim() - 1; ++i) part.idx1.push_back(i);
  part.idx2.push_back(b.q_index());
  return part;
}

BlockEstimate md_estimate(const PointFit& fit, const Partition& part) {
  if (part.idx2.empty()) throw InvalidInput("empty redundant block");
  const Eigen::VectorXd theta = fit.theta;
  const Eigen::MatrixXd omega = fit.omega_data();
  const Eigen::MatrixXd o11 = submatrix(omega, part.idx1, part.idx1);
  const Eigen::MatrixXd o12 = submatrix(omega, part.idx1, part.idx2);
  const Eigen::MatrixXd o22i =
      safe_inverse(submatrix(omega, part.idx2, part.idx2), "Omega_22 block singular");
  BlockEstimate out;
  out.theta1 = subvector(theta, part.idx1) - o12 * o22i * subvector(theta, part.idx2);
  out.omega11 = o11 - o12 * o22i * o12.transpose();
  return out;
}

BlockEstimate short_estimate(const PointFit& fit, const Partition& part) {
  // Work in normalized coordinates, where dropping the redundant columns is a
  // plain block solve; then rescale to data units.
  const Eigen::MatrixXd g11 = submatrix(fit.gamma, part.idx1, part.idx1);
  const Eigen::MatrixXd g12 = submatrix(fit.gamma, part.idx1, part.idx2);
  const Eigen::MatrixXd g11i = safe_inverse(g11, "Gamma_11 block singular");
  const Eigen::VectorXd b1 =
      subvector(fit.b, part.idx1) + g11i * g12 * subvector(fit.b, part.idx2);
  const Eigen::MatrixXd s11 = submatrix(fit.sigma, part.idx1, part.idx1);
  const Eigen::VectorXd ups = subvector(fit.upsilon, part.idx1);
  BlockEstimate out;
  out.theta1 = ups.asDiagonal() * b1;
  out.omega11 = ups.asDiagonal() * (g11i * s11 * g11i) * ups.asDiagonal();
  return out;
}

double asy_variance_interior(int p, int ell, const KernelSpec& k,
                             const std::optional<RedundantSpec>& q, double lo, double hi) {
  if (ell > p - 1 || ell < 0) throw InvalidInput("derivative order exceeds p-1");
  BasisSpec b;
  b.p = p;
  b.redundant = q;
  const Eigen::MatrixXd omega = pop_omega(b, k, lo, hi);
  if (!q) return omega(ell + 1, ell + 1);
  std::vector<int> idx1, idx2{b.q_index()};
  for (int i = 0; i <= p; ++i) idx1.push_back(i);
  const Eigen::MatrixXd o11 = submatrix(omega, idx1, idx1);
  const Eigen::MatrixXd o12 = submatrix(omega, idx1, idx2);
  const Eigen::MatrixXd o22i =
      safe_inverse(submatrix(omega, idx2, idx2), "Omega_22 block singular");
  const Eigen::MatrixXd md = o11 - o12 * o22i * o12.transpose();
  return md(ell + 1, ell + 1);
}

double variance_bound(int p, int ell) {
  if (ell < 0 || ell > p - 1) throw InvalidInput("derivative order outside [0, p-1]");
  Eigen::MatrixXd m(p, p);
  for (int a = 0; a < p; ++a)
    for (int c = 0; c < p; ++c) {
      const int e = a + c;
      m(a, c) = (e % 2 == 0 ? 2.0 / (e + 1) : 0.0) / (factorial(a) * factorial(c));
    }
  return m.inverse()(ell, ell);
}

double md_asy_variance_closed(int p, int ell, int j) {
  const double J = j;
  if (p == 1 && ell == 0) return (11 + 4 * J) / (20 + 8 * J);
  if (p == 3) {
    if (ell == 0) return 9 * (4 * J + 15) / (16 * (2 * J + 7));
    if (ell == 1) return (12 * J + 39) / (8 * J + 20);
    if (ell == 2) return 45 * (4 * J + 19) / (8 * J + 28);
  }
  if (p == 5) {
    if (ell == 0) return 225 * (4 * J + 19) / (256 * (2 * J + 9));
    if (ell == 1) return 75 * (4 * J + 17) / (16 * (2 * J + 7));
    if (ell == 2) return 2205 * (4 * J + 23) / (16 * (2 * J + 9));
    if (ell == 3) return 1575 * (4 * J + 21) / (8 * J + 28);
    if (ell == 4) return 99225 * (4 * J + 27) / (8 * J + 36);
  }
  throw InvalidInput("no closed-form variance for this (p, ell)");
}

double optq_objective(int p, int ell, const KernelSpec& k,
                      const std::function<double(double)>& Q) {
  if (ell < 0 || ell > p - 1) throw InvalidInput("derivative order outside [0, p-1]");
  // K-weighted inner products on [-1,1] with basis A = (1, u, u^2/2!, ...).
  const int d = p + 1;
  auto basisA = [&](double u) {
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a(i) = std::pow(u, i) / factorial(i);
    return a;
  };
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd cross = Eigen::VectorXd::Zero(d);
  quad::foreach_node_breaks(-1.0, 1.0, {0.0}, kOrder, [&](double u, double w) {
    const double kw = w * kernel_eval(k, u);
    const Eigen::VectorXd a = basisA(u);
    gram += kw * a * a.transpose();
    cross += kw * Q(u) * a;
  });
  const Eigen::VectorXd proj = safe_inverse(gram, "K-weighted Gram singular") * cross;
  auto qperp = [&](double u) { return Q(u) - basisA(u).dot(proj); };

  // P_ell(u) = e_ell' (int Pperp Pperp' K)^{-1} Pperp(u), with Pperp the
  // P block K-orthogonalized against the constant.
  Eigen::VectorXd pmean = Eigen::VectorXd::Zero(p);
  quad::foreach_node_breaks(-1.0, 1.0, {0.0}, kOrder, [&](double u, double w) {
    pmean += (w * kernel_eval(k, u)) * basisA(u).tail(p);
  });
  auto pperp = [&](double u) -> Eigen::VectorXd { return basisA(u).tail(p) - pmean; };
  Eigen::MatrixXd pgram = Eigen::MatrixXd::Zero(p, p);
  quad::foreach_node_breaks(-1.0, 1.0, {0.0}, kOrder, [&](double u, double w) {
    const Eigen::VectorXd pp = pperp(u);
    pgram += (w * kernel_eval(k, u)) * pp * pp.transpose();
  });
  const Eigen::VectorXd coef = safe_inverse(pgram, "P Gram singular").row(ell).transpose();
  auto pell = [&](double u) { return coef.dot(pperp(u)); };

  double num = 0.0, den = 0.0;
  quad::foreach_node_breaks(-1.0, 1.0, {0.0}, kOrder, [&](double u, double wu) {
    const double ku = kernel_eval(k, u);
    double in_num = 0.0, in_den = 0.0;
    quad::foreach_node_breaks(-1.0, 1.0, {0.0, u}, kOrder, [&](double v, double wv) {
      const double m = wv * std::min(u, v) * kernel_eval(k, v) * qperp(v);
      in_num += m;
      in_den += m;
    });
    num += wu * ku * pell(u) * in_num;
    den += wu * ku * qperp(u) * in_den;
  });
  if (std::abs(den) < 1e-14) throw DegenerateVariance("redundant regressor orthogonal to target");
  return num * num / den;
}

std::vector<double> equivalent_kernel(int p, int ell, const KernelSpec& k,
                                      const std::optional<RedundantSpec>& q,
                                      const std::vector<double>& grid) {
  if (grid.size() < 64) throw InvalidInput("equivalent-kernel grid too coarse (need >= 64)");
  if (ell < 0 || ell > p - 1) throw InvalidInput("derivative order outside [0, p-1]");
  BasisSpec b;
  b.p = p;
  b.redundant = q;
  const int d = b.dim();
  const Eigen::MatrixXd gi = safe_inverse(pop_gamma(b, k, -1.0, 1.0), "population Gram singular");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  c(ell + 1) = 1.0;
  if (q) {
    const Eigen::MatrixXd omega = pop_omega(b, k, -1.0, 1.0);
    std::vector<int> idx1, idx2{b.q_index()};
    for (int i = 0; i <= p; ++i) idx1.push_back(i);
    const Eigen::MatrixXd o12 = submatrix(omega, idx1, idx2);
    const Eigen::MatrixXd o22i =
        safe_inverse(submatrix(omega, idx2, idx2), "Omega_22 block singular");
    const Eigen::VectorXd corr = o22i * o12.transpose() * c.head(p + 1);
    for (size_t i = 0; i < idx2.size(); ++i) c(idx2[i]) = -corr(i);
  }
  const Eigen::VectorXd g = gi.transpose() * c;
  auto phi = [&](double w) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(d);
    quad::foreach_node_breaks(std::max(w, -1.0), 1.0, {0.0}, kOrder, [&](double v, double wt) {
      m += (wt * kernel_eval(k, v)) * basis_eval(b, v);
    });
    return g.dot(m);
  };
  double norm = 1.0;
  if (ell == 0) {
    const double total = quad::integrate_breaks(phi, -1.0, 1.0, {0.0}, kOrder);
    if (std::abs(total) < 1e-12) throw DegenerateVariance("equivalent kernel integrates to zero");
    norm = 1.0 / total;
  }
  std::vector<double> out;
  out.reserve(grid.size());
  for (double w : grid) out.push_back(norm * phi(w));
  return out;
}

}  // namespace lrd
