#include "lrd/program_eval.hpp"

#include <cmath>

namespace lrd {

namespace {

constexpr double kClampLo = 1e-3;
constexpr double kClampHi = 1.0 - 1e-3;

void check_binary(const std::vector<int>& v, const char* name) {
  if (v.empty()) throw InvalidInput(std::string(name) + " column empty");
  for (int b : v)
    if (b != 0 && b != 1) throw InvalidInput(std::string(name) + " column not binary");
}

double loglik_at(const Eigen::MatrixXd& z, const std::vector<int>& y,
                 const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = z * beta;
  double ll = 0.0;
  for (int i = 0; i < eta.size(); ++i)
    ll += y[i] * eta(i) - std::log1p(std::exp(eta(i)));
  return ll;
}

}  // namespace

Eigen::VectorXd LogitModel::fitted(const Eigen::MatrixXd& z) const {
  const Eigen::VectorXd eta = z * beta;
  return eta.unaryExpr([](double e) { return 1.0 / (1.0 + std::exp(-e)); });
}

LogitModel fit_logit(const Eigen::MatrixXd& z, const std::vector<int>& y) {
  const int n = static_cast<int>(z.rows()), k = static_cast<int>(z.cols());
  if (static_cast<int>(y.size()) != n) throw InvalidInput("design/response length mismatch");
  check_binary(y, "response");
  int ones = 0;
  for (int b : y) ones += b;
  if (ones == 0 || ones == n) throw InvalidInput("response has a single class");

  LogitModel m;
  m.beta = Eigen::VectorXd::Zero(k);
  double ll = loglik_at(z, y, m.beta);
  Eigen::VectorXd yv(n);
  for (int i = 0; i < n; ++i) yv(i) = y[i];
  for (m.iterations = 1; m.iterations <= 100; ++m.iterations) {
    const Eigen::VectorXd p = m.fitted(z);
    const Eigen::VectorXd grad = z.transpose() * (yv - p);
    if (grad.norm() < 1e-8 * n) {
      m.converged = true;
      break;
    }
    const Eigen::VectorXd w = p.array() * (1.0 - p.array());
    Eigen::MatrixXd hess = z.transpose() * w.asDiagonal() * z;
    hess.diagonal().array() += 1e-12;
    const Eigen::VectorXd step = hess.ldlt().solve(grad);
    double scale = 1.0;
    Eigen::VectorXd cand = m.beta + step;
    double ll_new = loglik_at(z, y, cand);
    while (ll_new < ll && scale > 1e-8) {  // step halving on likelihood decrease
      scale *= 0.5;
      cand = m.beta + scale * step;
      ll_new = loglik_at(z, y, cand);
    }
    m.beta = cand;
    ll = ll_new;
  }
  m.loglik = ll;
  if (!m.converged) {
    const Eigen::VectorXd p = m.fitted(z);
    for (int i = 0; i < n; ++i)
      if (p(i) < 1e-10 || p(i) > 1.0 - 1e-10) m.separation = true;
  }
  return m;
}

int clamp_probabilities(Eigen::VectorXd& p) {
  int clamped = 0;
  for (int i = 0; i < p.size(); ++i) {
    if (p(i) < kClampLo) {
      p(i) = kClampLo;
      ++clamped;
    } else if (p(i) > kClampHi) {
      p(i) = kClampHi;
      ++clamped;
    }
  }
  return clamped;
}

std::vector<double> weights_subgroup(const std::vector<int>& t, int which) {
  check_binary(t, "group");
  if (which != 0 && which != 1) throw InvalidInput("subgroup must be 0 or 1");
  const int n = static_cast<int>(t.size());
  int count = 0;
  for (int b : t) count += (b == which);
  if (count == 0) throw InvalidInput("empty subgroup");
  const double p = static_cast<double>(count) / n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = (t[i] == which) ? 1.0 / p : 0.0;
  return w;
}

std::vector<double> weights_counterfactual(const std::vector<int>& t, const Eigen::MatrixXd& z) {
  check_binary(t, "group");
  const int n = static_cast<int>(t.size());
  const LogitModel m = fit_logit(z, t);
  Eigen::VectorXd p = m.fitted(z);
  clamp_probabilities(p);
  int ones = 0;
  for (int b : t) ones += b;
  if (ones == 0 || ones == n) throw InvalidInput("both groups required");
  const double p1 = static_cast<double>(ones) / n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i)
    w[i] = t[i] ? ((1.0 - p(i)) / p(i)) * (p1 / (1.0 - p1)) : 0.0;
  return w;
}

IvWeights weights_iv_validity(const std::vector<int>& t, const std::vector<int>& d) {
  check_binary(t, "treatment");
  check_binary(d, "instrument");
  if (t.size() != d.size()) throw InvalidInput("treatment/instrument length mismatch");
  const int n = static_cast<int>(t.size());
  int n00 = 0, n10 = 0, nd0 = 0, nd1 = 0;
  for (int i = 0; i < n; ++i) {
    nd0 += (d[i] == 0);
    nd1 += (d[i] == 1);
    n00 += (d[i] == 0 && t[i] == 0);
    n10 += (d[i] == 1 && t[i] == 0);
  }
  if (n00 == 0 || n10 == 0 || nd0 == 0 || nd1 == 0)
    throw InvalidInput("empty (d, t) cell for IV-validity weights");
  IvWeights out;
  out.w00.resize(n);
  out.w10.resize(n);
  const double p00 = static_cast<double>(n00) / n, p10 = static_cast<double>(n10) / n;
  for (int i = 0; i < n; ++i) {
    out.w00[i] = (d[i] == 0 && t[i] == 0) ? 1.0 / p00 : 0.0;
    out.w10[i] = (d[i] == 1 && t[i] == 0) ? 1.0 / p10 : 0.0;
  }
  out.scale00 = static_cast<double>(n00) / nd0;
  out.scale10 = static_cast<double>(n10) / nd1;
  return out;
}

std::vector<double> weights_complier(const std::vector<int>& t, const std::vector<int>& d,
                                     const Eigen::MatrixXd& z, ComplierTarget which) {
  check_binary(t, "treatment");
  check_binary(d, "instrument");
  if (t.size() != d.size()) throw InvalidInput("treatment/instrument length mismatch");
  const int n = static_cast<int>(t.size());
  const LogitModel m = fit_logit(z, d);
  Eigen::VectorXd p = m.fitted(z);  // P[d=1 | z]
  clamp_probabilities(p);
  // First-stage share P[t(1) > t(0)], Abadie-style plug-in.
  double share = 0.0;
  for (int i = 0; i < n; ++i)
    share += t[i] * d[i] / p(i) - t[i] * (1 - d[i]) / (1.0 - p(i));
  share /= n;
  if (!(share > 0.0)) throw InvalidInput("nonpositive estimated complier share");
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    const double p1 = p(i), p0 = 1.0 - p(i);
    double v = 0.0;
    switch (which) {
      case ComplierTarget::observed:
        v = 1.0 - t[i] * (1 - d[i]) / p0 - (1 - t[i]) * d[i] / p1;
        break;
      case ComplierTarget::y0:
        v = (1 - t[i]) * (1 - d[i] - p0) / (p0 * p1);
        break;
      case ComplierTarget::y1:
        v = t[i] * (d[i] - p1) / (p0 * p1);
        break;
    }
    w[i] = v / share;
  }
  return w;
}

}  // namespace lrd
