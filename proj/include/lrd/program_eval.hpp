#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "lrd/errors.hpp"

namespace lrd {

// Outcome, binary group/treatment, optional binary instrument, covariates
// (first column expected to be the intercept).
struct PanelData {
  std::vector<double> x;
  std::vector<int> t;
  std::optional<std::vector<int>> d;
  Eigen::MatrixXd z;
};

struct LogitModel {
  Eigen::VectorXd beta;
  bool converged = false;
  bool separation = false;
  int iterations = 0;
  double loglik = 0.0;

  Eigen::VectorXd fitted(const Eigen::MatrixXd& z) const;  // unclamped probs
};

// Maximum-likelihood logit via IRLS with step halving (max 100 iterations).
LogitModel fit_logit(const Eigen::MatrixXd& z, const std::vector<int>& y);

// Probabilities clamped into [1e-3, 1-1e-3] before entering weight ratios;
// returns the number of observations that hit the clamp.
int clamp_probabilities(Eigen::VectorXd& p);

// 1(t_i = which) / sample share; mean one by construction.
std::vector<double> weights_subgroup(const std::vector<int>& t, int which);

// DiNardo-Fortin-Lemieux counterfactual weights for group 1 reweighted to
// look like group 0: t_i * (P[t=0|z]/P[t=1|z]) * (P[t=1]/P[t=0]).
std::vector<double> weights_counterfactual(const std::vector<int>& t, const Eigen::MatrixXd& z);

struct IvWeights {
  std::vector<double> w00, w10;  // cell weights (d=0,t=0) and (d=1,t=0)
  double scale00 = 0.0, scale10 = 0.0;  // P[t=0|d=0], P[t=0|d=1]
};

// Cell weights and scales for the testable IV-validity density inequalities.
IvWeights weights_iv_validity(const std::vector<int>& t, const std::vector<int>& d);

enum class ComplierTarget { observed, y0, y1 };

// Abadie-style complier density weights with logit instrument propensity and
// plug-in first-stage share.
std::vector<double> weights_complier(const std::vector<int>& t, const std::vector<int>& d,
                                     const Eigen::MatrixXd& z, ComplierTarget which);

}  // namespace lrd
