#include <doctest.h>

#include <cmath>

#include "lrd/program_eval.hpp"

using namespace lrd;

namespace {

Eigen::MatrixXd intercept_only(int n) { return Eigen::MatrixXd::Ones(n, 1); }

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

}  // namespace

TEST_CASE("intercept-only logit recovers the sample proportion") {
  const std::vector<int> y = {1, 0, 0, 1, 0, 0, 0, 1, 0, 0};
  const LogitModel m = fit_logit(intercept_only(10), y);
  CHECK(m.converged);
  CHECK(m.beta(0) == doctest::Approx(std::log(0.3 / 0.7)).epsilon(1e-6));
  CHECK(m.fitted(intercept_only(10))(0) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("logit label swap flips all coefficients") {
  Eigen::MatrixXd z(8, 2);
  z << 1, -1.2, 1, 0.4, 1, 0.9, 1, -0.3, 1, 1.5, 1, -0.7, 1, 0.2, 1, 0.8;
  const std::vector<int> y = {0, 1, 1, 0, 1, 0, 0, 1};
  std::vector<int> y_flip(y.size());
  for (size_t i = 0; i < y.size(); ++i) y_flip[i] = 1 - y[i];
  const LogitModel a = fit_logit(z, y);
  const LogitModel b = fit_logit(z, y_flip);
  CHECK((a.beta + b.beta).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("logit input validation") {
  CHECK_THROWS_AS(fit_logit(intercept_only(4), {1, 1, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(fit_logit(intercept_only(4), {0, 1, 2, 0}), InvalidInput);
  CHECK_THROWS_AS(fit_logit(intercept_only(3), {0, 1}), InvalidInput);
}

TEST_CASE("probability clamping") {
  Eigen::VectorXd p(4);
  p << 1e-9, 0.5, 0.9999, 0.2;
  CHECK(clamp_probabilities(p) == 2);
  CHECK(p(0) == 1e-3);
  CHECK(p(2) == 1.0 - 1e-3);
  CHECK(p(1) == 0.5);
}

TEST_CASE("subgroup weights") {
  const std::vector<int> t = {1, 1, 0, 0};
  const std::vector<double> w1 = weights_subgroup(t, 1);
  CHECK(w1[0] == 2.0);
  CHECK(w1[1] == 2.0);
  CHECK(w1[2] == 0.0);
  CHECK(w1[3] == 0.0);
  const std::vector<double> w0 = weights_subgroup(t, 0);
  CHECK(w0[2] == 2.0);
  CHECK(mean(w1) == 1.0);
  CHECK(mean(w0) == 1.0);
  CHECK_THROWS_AS(weights_subgroup({1, 1, 1}, 0), InvalidInput);
  CHECK_THROWS_AS(weights_subgroup(t, 2), InvalidInput);
}

TEST_CASE("counterfactual weights with no covariate information are the treated indicator") {
  const std::vector<int> t = {1, 0, 0, 1, 0, 1, 0, 0, 1, 0};
  const std::vector<double> w = weights_counterfactual(t, intercept_only(10));
  for (size_t i = 0; i < t.size(); ++i)
    CHECK(w[i] == doctest::Approx(static_cast<double>(t[i])).epsilon(1e-6));
}

TEST_CASE("counterfactual weights: control rows zero, treated rows positive") {
  Eigen::MatrixXd z(12, 2);
  z << 1, -1.0, 1, -0.6, 1, -0.2, 1, 0.1, 1, 0.4, 1, 0.8, 1, -0.9, 1, -0.4, 1, 0.0, 1, 0.3, 1,
      0.6, 1, 1.1;
  const std::vector<int> t = {0, 0, 0, 1, 1, 1, 0, 0, 1, 1, 1, 0};
  const std::vector<double> w = weights_counterfactual(t, z);
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0)
      CHECK(w[i] == 0.0);
    else
      CHECK(w[i] > 0.0);
  }
}

TEST_CASE("IV-validity cell weights and scales on a fixture") {
  //          d: 0  0  0  1  1  1  1  0
  //          t: 0  1  0  0  1  1  0  0
  const std::vector<int> d = {0, 0, 0, 1, 1, 1, 1, 0};
  const std::vector<int> t = {0, 1, 0, 0, 1, 1, 0, 0};
  const IvWeights iv = weights_iv_validity(t, d);
  // three (d=0,t=0) cells of eight, two (d=1,t=0) cells of eight
  CHECK(iv.w00[0] == doctest::Approx(8.0 / 3));
  CHECK(iv.w00[1] == 0.0);
  CHECK(iv.w00[3] == 0.0);
  CHECK(iv.w10[3] == doctest::Approx(4.0));
  CHECK(iv.w10[6] == doctest::Approx(4.0));
  CHECK(iv.w10[0] == 0.0);
  CHECK(mean(iv.w00) == doctest::Approx(1.0));
  CHECK(mean(iv.w10) == doctest::Approx(1.0));
  CHECK(iv.scale00 == doctest::Approx(0.75));
  CHECK(iv.scale10 == doctest::Approx(0.5));
  CHECK_THROWS_AS(weights_iv_validity({0, 0, 1, 1}, {0, 0, 1, 1}), InvalidInput);
}

TEST_CASE("complier weights are identically one under perfect compliance") {
  std::vector<int> d(20);
  for (int i = 0; i < 20; ++i) d[i] = i % 2;
  const std::vector<double> w = weights_complier(d, d, intercept_only(20),
                                                 ComplierTarget::observed);
  for (double v : w) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
  const std::vector<double> w1 = weights_complier(d, d, intercept_only(20), ComplierTarget::y1);
  for (int i = 0; i < 20; ++i)
    CHECK(w1[i] == doctest::Approx(d[i] ? 2.0 : 0.0).epsilon(1e-6));
  CHECK(mean(w1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("complier weights hand oracle with one-sided noncompliance") {
  // d is the instrument (4 of 10 on), t the treatment: everyone with d=0
  // stays untreated, one d=1 unit refuses
  const std::vector<int> d = {1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
  const std::vector<int> t = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  // intercept-only propensity is 0.4; share = (3/10)/0.4 = 0.75
  const std::vector<double> w = weights_complier(t, d, intercept_only(10),
                                                 ComplierTarget::observed);
  for (int i = 0; i < 3; ++i) CHECK(w[i] == doctest::Approx(4.0 / 3).epsilon(1e-5));
  // the never-taker with the instrument on: 1 - 1/0.4, scaled by the share
  CHECK(w[3] == doctest::Approx((1.0 - 1.0 / 0.4) / 0.75).epsilon(1e-5));
  for (int i = 4; i < 10; ++i) CHECK(w[i] == doctest::Approx(4.0 / 3).epsilon(1e-5));
  CHECK(mean(w) == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(weights_complier({0, 0, 1, 1}, {1, 1, 0, 0}, intercept_only(4),
                                   ComplierTarget::observed),
                  InvalidInput);  // negative estimated share
}
