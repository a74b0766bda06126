#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "lrd/basis.hpp"
#include "lrd/fit.hpp"
#include "lrd/kernels.hpp"

namespace lrd {

// Index sets partitioning theta into the kept block (intercept + P) and the
// redundant block whose population coefficients are zero.
struct Partition {
  std::vector<int> idx1, idx2;
};

Partition default_partition(const BasisSpec& b);

struct BlockEstimate {
  Eigen::VectorXd theta1;
  Eigen::MatrixXd omega11;  // data units; Var[c' theta1] = c' omega11 c
};

// theta_1 - Omega_12 Omega_22^{-1} theta_2 with the Schur-complement variance.
BlockEstimate md_estimate(const PointFit& fit, const Partition& part);

// Short regression: equals a refit without the redundant columns.
BlockEstimate short_estimate(const PointFit& fit, const Partition& part);

// Interior (or truncated-support) asymptotic variance constant of the
// ell-th density derivative, f = 1 normalization.  With a redundant regressor
// present, returns the minimum-distance (Schur complement) constant.
double asy_variance_interior(int p, int ell, const KernelSpec& k,
                             const std::optional<RedundantSpec>& q = std::nullopt,
                             double lo = -1.0, double hi = 1.0);

// Efficiency bound nu_ell = e_ell' (int Pdot Pdot' du)^{-1} e_ell.
double variance_bound(int p, int ell);

// Hard-coded rational expressions for the uniform-kernel MD constants,
// p in {1,3,5}.  The index j refers to redundant monomial exponent 2j+1 for
// even ell and 2j for odd ell (so small j can be collinear with the p-basis;
// the expressions are meaningful once the exponent exceeds p).
double md_asy_variance_closed(int p, int ell, int j);

// Value of the variational efficiency-gain objective for a candidate Q,
// projected into the admissible class (K-orthogonal to 1 and P).
double optq_objective(int p, int ell, const KernelSpec& k,
                      const std::function<double(double)>& Q);

// Implied first-order kernel phi on the given grid; normalized to integrate
// to one when ell = 0.
std::vector<double> equivalent_kernel(int p, int ell, const KernelSpec& k,
                                      const std::optional<RedundantSpec>& q,
                                      const std::vector<double>& grid);

}  // namespace lrd
