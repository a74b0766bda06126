#include "lrd/basis.hpp"

#include <cmath>

namespace lrd {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Exact Lebesgue moment of u^a on [-1,1].
double monomial_moment(int a) { return a % 2 == 0 ? 2.0 / (a + 1) : 0.0; }

}  // namespace

int BasisSpec::dim() const {
  int d;
  if (split_at_zero) {
    d = split_order + 2 * (p - split_order + 1);
  } else {
    d = 1 + p;
  }
  return d + (redundant ? 1 : 0);
}

int BasisSpec::coeff_index(int deriv) const {
  const int order = deriv + 1;  // monomial order carrying f^(deriv)
  if (order < 0 || order > p) throw InvalidInput("derivative order out of range for basis");
  if (!split_at_zero || order < split_order) return order;
  return split_order + 2 * (order - split_order);
}

Eigen::VectorXd basis_eval(const BasisSpec& b, double u) {
  Eigen::VectorXd r(b.dim());
  int idx = 0;
  const int first_split = b.split_at_zero ? b.split_order : b.p + 1;
  for (int k = 0; k <= b.p; ++k) {
    const double m = std::pow(u, k) / factorial(k);
    if (k < first_split) {
      r(idx++) = m;
    } else {
      r(idx++) = u < 0 ? m : 0.0;
      r(idx++) = u < 0 ? 0.0 : m;
    }
  }
  if (b.redundant) {
    const int e = b.redundant->exponent();
    double q = std::pow(u, e);
    if (b.redundant->orthogonalized) {
      const Eigen::VectorXd m = redundant_orthogonalization(b.p, e);
      double proj = m(0);
      for (int k = 1; k <= b.p; ++k) proj += m(k) * std::pow(u, k) / factorial(k);
      q -= proj;
    }
    r(idx++) = q;
  }
  return r;
}

std::vector<int> scale_exponents(const BasisSpec& b) {
  std::vector<int> e;
  const int first_split = b.split_at_zero ? b.split_order : b.p + 1;
  for (int k = 0; k <= b.p; ++k) {
    e.push_back(k);
    if (k >= first_split) e.push_back(k);
  }
  if (b.redundant) e.push_back(b.redundant->exponent());
  return e;
}

Eigen::VectorXd scaling_matrix(const BasisSpec& b, double h) {
  if (!(h > 0)) throw InvalidInput("bandwidth must be positive");
  const auto exps = scale_exponents(b);
  Eigen::VectorXd d(static_cast<int>(exps.size()));
  for (int i = 0; i < d.size(); ++i) d(i) = std::pow(h, -exps[i]);
  return d;
}

Eigen::VectorXd redundant_orthogonalization(int p, int exponent) {
  // Gram of A(u) = (1, u, u^2/2!, ..., u^p/p!) under Lebesgue on [-1,1].
  Eigen::MatrixXd gram(p + 1, p + 1);
  Eigen::VectorXd rhs(p + 1);
  for (int a = 0; a <= p; ++a) {
    for (int c = 0; c <= p; ++c)
      gram(a, c) = monomial_moment(a + c) / (factorial(a) * factorial(c));
    rhs(a) = monomial_moment(a + exponent) / factorial(a);
  }
  return gram.ldlt().solve(rhs);
}

Eigen::MatrixXd coefficient_map(const BasisSpec& b) {
  const int d = b.dim();
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(d, d);
  if (b.redundant && b.redundant->orthogonalized) {
    if (b.split_at_zero)
      throw InvalidInput("orthogonalized redundant regressor with split basis unsupported");
    const Eigen::VectorXd m = redundant_orthogonalization(b.p, b.redundant->exponent());
    // R'b = A'(b_A - M b_Q) + u^m b_Q with A the (1, P) block.
    L.block(0, b.q_index(), b.p + 1, 1) = -m;
  }
  return L;
}

Eigen::VectorXd derivative_basis(int p, double u) {
  if (p < 1) throw InvalidInput("derivative basis needs p >= 1");
  Eigen::VectorXd r(p);
  for (int k = 0; k < p; ++k) r(k) = std::pow(u, k) / factorial(k);
  return r;
}

}  // namespace lrd
