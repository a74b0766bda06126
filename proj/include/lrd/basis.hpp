#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lrd/errors.hpp"

namespace lrd {

// Redundant regressor Q(u) = u^{2j+1} (odd) or u^{2j+2} (even), optionally
// orthogonalized against (1, P) on [-1,1] under Lebesgue measure.
struct RedundantSpec {
  int j = 1;
  enum class Parity { odd, even } parity = Parity::odd;
  bool orthogonalized = false;

  int exponent() const { return parity == Parity::odd ? 2 * j + 1 : 2 * j + 2; }
};

// Local basis R(u).  Plain polynomial: (1, u, u^2/2!, ..., u^p/p!).
// With split_at_zero, monomials of order >= split_order are duplicated into
// one-sided terms u^k/k! 1(u<0) and u^k/k! 1(u>=0).  A redundant regressor,
// when present, is appended last.
struct BasisSpec {
  int p = 2;
  std::optional<RedundantSpec> redundant;
  bool split_at_zero = false;
  int split_order = 2;  // lowest duplicated order when split_at_zero

  int dim() const;
  // Index of the coefficient estimating f^(deriv); deriv = -1 selects the
  // intercept (CDF).  Split bases resolve to the left-side coefficient.
  int coeff_index(int deriv) const;
  bool has_redundant() const { return redundant.has_value(); }
  int q_index() const { return dim() - 1; }
};

Eigen::VectorXd basis_eval(const BasisSpec& b, double u);

// Per-component exponent k such that component scales as h^{-k} under
// u -> u/h (for the orthogonalized Q this is the leading-monomial exponent).
std::vector<int> scale_exponents(const BasisSpec& b);

// Upsilon_h = diag(h^{-k}) with Upsilon_h R(u) = R(u/h) for monomial bases.
Eigen::VectorXd scaling_matrix(const BasisSpec& b, double h);

// Orthogonalization coefficients M with Q(u) = u^m - (1, P(u)')' M.
Eigen::VectorXd redundant_orthogonalization(int p, int exponent);

// Linear map L such that monomial-basis coefficients equal L * b, where b are
// the fitted coefficients on this basis.  Identity except for an
// orthogonalized redundant regressor, whose lower-order content is folded back
// into the (1, P) block.
Eigen::MatrixXd coefficient_map(const BasisSpec& b);

// P-dot basis (1, u, ..., u^{p-1}/(p-1)!), length p.
Eigen::VectorXd derivative_basis(int p, double u);

}  // namespace lrd
