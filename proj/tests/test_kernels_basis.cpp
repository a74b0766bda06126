#include <doctest.h>

#include <cmath>

#include "lrd/basis.hpp"
#include "lrd/kernels.hpp"
#include "lrd/quadrature.hpp"

using namespace lrd;

TEST_CASE("kernel point values") {
  CHECK(kernel_eval({KernelKind::uniform}, 0.3) == 0.5);
  CHECK(kernel_eval({KernelKind::epanechnikov}, 0.0) == 0.75);
  CHECK(kernel_eval({KernelKind::triangular}, 2.0) == 0.0);
  CHECK(kernel_eval({KernelKind::triangular}, 0.25) == 0.75);
  CHECK(kernel_eval({KernelKind::uniform}, -1.5) == 0.0);
}

TEST_CASE("kernels integrate to one and are symmetric") {
  for (KernelKind kind : {KernelKind::uniform, KernelKind::triangular, KernelKind::epanechnikov}) {
    KernelSpec k{kind};
    const double total =
        quad::integrate_breaks([&](double u) { return kernel_eval(k, u); }, -1.0, 1.0, {0.0}, 32);
    CHECK(std::abs(total - 1.0) < 1e-10);
    for (double u = 0.0; u <= 1.0; u += 0.05)
      CHECK(kernel_eval(k, u) == kernel_eval(k, -u));
  }
}

TEST_CASE("kernel string round trip") {
  CHECK(kernel_from_string("uniform") == KernelKind::uniform);
  CHECK(kernel_from_string("epanechnikov") == KernelKind::epanechnikov);
  CHECK(to_string(KernelKind::triangular) == "triangular");
  CHECK_THROWS_AS(kernel_from_string("gaussian"), InvalidInput);
}

TEST_CASE("polynomial basis with factorial scaling") {
  BasisSpec b;
  b.p = 2;
  const Eigen::VectorXd r = basis_eval(b, 1.0);
  REQUIRE(r.size() == 3);
  CHECK(r(0) == 1.0);
  CHECK(r(1) == 1.0);
  CHECK(r(2) == 0.5);
}

TEST_CASE("unorthogonalized redundant regressor is the raw monomial") {
  BasisSpec b;
  b.p = 1;
  b.redundant = RedundantSpec{1, RedundantSpec::Parity::odd, false};  // u^3
  const Eigen::VectorXd r = basis_eval(b, 2.0);
  REQUIRE(r.size() == 3);
  CHECK(r(0) == 1.0);
  CHECK(r(1) == 2.0);
  CHECK(r(2) == 8.0);
}

TEST_CASE("orthogonalized u^3 against (1, u) is u^3 - 3u/5") {
  BasisSpec b;
  b.p = 1;
  b.redundant = RedundantSpec{1, RedundantSpec::Parity::odd, true};
  for (double u : {-0.7, 0.0, 0.3, 1.0}) {
    const Eigen::VectorXd r = basis_eval(b, u);
    CHECK(r(2) == doctest::Approx(u * u * u - 0.6 * u).epsilon(1e-12));
  }
  // orthogonality of the redundant component against (1, P) on [-1,1]
  for (int row = 0; row <= b.p; ++row) {
    const double ip = quad::integrate(
        [&](double u) {
          const Eigen::VectorXd r = basis_eval(b, u);
          return r(row) * r(2);
        },
        -1.0, 1.0, 16);
    CHECK(std::abs(ip) < 1e-10);
  }
}

TEST_CASE("orthogonalized Q is Lebesgue-orthogonal for larger bases too") {
  BasisSpec b;
  b.p = 3;
  b.redundant = RedundantSpec{3, RedundantSpec::Parity::odd, true};  // u^7
  const int q = b.q_index();
  for (int row = 0; row <= b.p; ++row) {
    const double ip = quad::integrate(
        [&](double u) {
          const Eigen::VectorXd r = basis_eval(b, u);
          return r(row) * r(q);
        },
        -1.0, 1.0, 24);
    CHECK(std::abs(ip) < 1e-10);
  }
}

TEST_CASE("scaling matrix examples") {
  BasisSpec b1;
  b1.p = 1;
  Eigen::VectorXd d = scaling_matrix(b1, 0.5);
  CHECK(d(0) == 1.0);
  CHECK(d(1) == 2.0);

  BasisSpec b2;
  b2.p = 2;
  d = scaling_matrix(b2, 1.0);
  CHECK(d.isApprox(Eigen::VectorXd::Ones(3)));

  BasisSpec b3;
  b3.p = 1;
  b3.redundant = RedundantSpec{1, RedundantSpec::Parity::odd, false};
  d = scaling_matrix(b3, 0.1);
  CHECK(d(0) == doctest::Approx(1.0));
  CHECK(d(1) == doctest::Approx(10.0));
  CHECK(d(2) == doctest::Approx(1000.0));

  CHECK_THROWS_AS(scaling_matrix(b1, 0.0), InvalidInput);
}

TEST_CASE("dilation identity Upsilon_h R(u) = R(u/h) for monomial bases") {
  BasisSpec b;
  b.p = 3;
  b.redundant = RedundantSpec{2, RedundantSpec::Parity::even, false};  // u^6
  for (double h : {0.01, 0.5, 2.0}) {
    const Eigen::VectorXd ups = scaling_matrix(b, h);
    for (double u = -1.0; u <= 1.0; u += 0.125) {
      const Eigen::VectorXd lhs = ups.asDiagonal() * basis_eval(b, u);
      const Eigen::VectorXd rhs = basis_eval(b, u / h);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-9 * rhs.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("coefficient map folds the orthogonalized Q back into monomials") {
  BasisSpec orth;
  orth.p = 2;
  orth.redundant = RedundantSpec{2, RedundantSpec::Parity::odd, true};  // u^5
  BasisSpec mono = orth;
  mono.redundant->orthogonalized = false;
  const Eigen::MatrixXd L = coefficient_map(orth);
  Eigen::VectorXd coef(4);
  coef << 0.3, -1.2, 0.5, 2.0;
  for (double u : {-0.9, -0.2, 0.4, 1.0}) {
    const double lhs = basis_eval(orth, u).dot(coef);
    const double rhs = basis_eval(mono, u).dot(L * coef);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("split basis duplicates high orders one-sidedly") {
  BasisSpec b;
  b.p = 2;
  b.split_at_zero = true;
  b.split_order = 2;
  REQUIRE(b.dim() == 4);  // 1, u, u^2/2 1(u<0), u^2/2 1(u>=0)
  Eigen::VectorXd r = basis_eval(b, -0.5);
  CHECK(r(0) == 1.0);
  CHECK(r(1) == -0.5);
  CHECK(r(2) == doctest::Approx(0.125));
  CHECK(r(3) == 0.0);
  r = basis_eval(b, 0.5);
  CHECK(r(2) == 0.0);
  CHECK(r(3) == doctest::Approx(0.125));
  CHECK(b.coeff_index(1) == 2);  // left-side coefficient
  CHECK(b.coeff_index(0) == 1);
  CHECK(b.coeff_index(-1) == 0);
}

TEST_CASE("derivative basis") {
  Eigen::VectorXd r = derivative_basis(2, 1.0);
  CHECK(r(0) == 1.0);
  CHECK(r(1) == 1.0);
  r = derivative_basis(3, 2.0);
  CHECK(r(2) == doctest::Approx(2.0));
  r = derivative_basis(1, 7.0);
  REQUIRE(r.size() == 1);
  CHECK(r(0) == 1.0);
}
