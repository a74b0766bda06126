#include "lrd/band.hpp"

#include <algorithm>
#include <cmath>

#include "lrd/rng.hpp"

namespace lrd {

Eigen::MatrixXd cross_sigma_hat(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                                double x, double y) {
  const Eigen::MatrixXd px = psi_hat_all(s, F, cfg, x);
  const Eigen::MatrixXd py = psi_hat_all(s, F, cfg, y);
  const double n = s.n();
  return px.transpose() * py / (n * n);
}

Eigen::MatrixXd influence_matrix(const SortedSample& s, const EdfValues& F, const FitConfig& cfg,
                                 const std::vector<double>& grid, int deriv) {
  const int m = static_cast<int>(grid.size());
  Eigen::MatrixXd infl(s.n(), m);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(cfg.basis.dim());
  c(cfg.basis.coeff_index(deriv)) = 1.0;
  for (int j = 0; j < m; ++j)
    infl.col(j) = influence_scalars(s, F, cfg, grid[j], c);
  return infl;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& influences) {
  const int m = static_cast<int>(influences.cols());
  Eigen::MatrixXd cov = influences.transpose() * influences;
  Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  for (int j = 0; j < m; ++j)
    if (!(sd(j) > 0.0)) throw DegenerateVariance("zero influence variance at a grid point");
  Eigen::MatrixXd corr = sd.cwiseInverse().asDiagonal() * cov * sd.cwiseInverse().asDiagonal();
  for (int a = 0; a < m; ++a) {
    corr(a, a) = 1.0;
    for (int b = 0; b < m; ++b)
      if (a != b) corr(a, b) = std::clamp(corr(a, b), -1.0, 1.0);
  }
  return 0.5 * (corr + corr.transpose());
}

namespace {

// Factor for sampling: Cholesky with an escalating diagonal jitter, then an
// eigenvalue clip as the last resort.
Eigen::MatrixXd sampling_factor(const Eigen::MatrixXd& corr, double jitter_start,
                                BandDiagnostics* diag) {
  BandDiagnostics local;
  Eigen::MatrixXd factor;
  bool done = false;
  {
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() == Eigen::Success) {
      factor = llt.matrixL();
      done = true;
    }
  }
  for (double j = jitter_start; !done && j <= 1e-4; j *= 10.0) {
    Eigen::MatrixXd m = corr;
    m.diagonal().array() += j;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      factor = llt.matrixL();
      local.jitter_used = j;
      done = true;
    }
  }
  if (!done) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(0.0);
    factor = eig.eigenvectors() * ev.cwiseSqrt().asDiagonal();
    local.eigen_clipped = true;
  }
  if (diag) *diag = local;
  return factor;
}

}  // namespace

std::vector<double> gp_sup_draws(const Eigen::MatrixXd& corr, int draws, std::uint64_t seed,
                                 double jitter_start, BandDiagnostics* diag) {
  if (corr.rows() != corr.cols() || corr.rows() < 1) throw InvalidInput("bad correlation matrix");
  const int m = static_cast<int>(corr.rows());
  const Eigen::MatrixXd factor = sampling_factor(corr, jitter_start, diag);
  std::vector<double> sups(draws);
  Eigen::VectorXd z(m);
  for (int d = 0; d < draws; ++d) {
    NormalSampler normal(rng_stream(seed, static_cast<std::uint64_t>(d)));
    for (int j = 0; j < m; ++j) z(j) = normal();
    sups[d] = (factor * z).cwiseAbs().maxCoeff();
  }
  std::sort(sups.begin(), sups.end());
  return sups;
}

double gp_sup_quantile(const Eigen::MatrixXd& corr, double alpha, int draws, std::uint64_t seed,
                       double jitter_start, BandDiagnostics* diag) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha outside (0, 1)");
  if (draws < 100) throw InvalidInput("need at least 100 simulation draws");
  const std::vector<double> sups = gp_sup_draws(corr, draws, seed, jitter_start, diag);
  int k = static_cast<int>(std::ceil((1.0 - alpha) * (draws + 1)));  // 1-based, conservative
  k = std::min(k, draws);
  return sups[k - 1];
}

BandResult confidence_band(const SortedSample& s, const EdfValues& F, const GridFit& gridfit,
                           const BandConfig& cfg) {
  if (cfg.grid.size() != gridfit.fits.size())
    throw InvalidInput("band grid does not match grid fit");
  const bool use_inference = !gridfit.inference.empty();
  const std::vector<PointFit>& fits = use_inference ? gridfit.inference : gridfit.fits;
  for (const PointFit& f : fits)
    if (!f.ok) throw InsufficientLocalData("grid point failed to fit: " + f.flag);
  FitConfig fc = gridfit.cfg;
  if (use_inference) {
    fc.basis = *gridfit.cfg.inference_basis;
    fc.inference_basis.reset();
  }
  BandResult out;
  out.draws = cfg.draws;
  const Eigen::MatrixXd infl = influence_matrix(s, F, fc, cfg.grid, cfg.deriv);
  const Eigen::MatrixXd corr = correlation_matrix(infl);
  out.quantile = gp_sup_quantile(corr, cfg.alpha, cfg.draws, cfg.seed, cfg.jitter_start,
                                 &out.diag);
  for (size_t j = 0; j < fits.size(); ++j) {
    const PointFit& f = fits[j];
    out.x.push_back(f.x);
    out.center.push_back(f.estimate(cfg.deriv));
    out.se.push_back(f.se(cfg.deriv));
    out.lo.push_back(out.center.back() - out.quantile * out.se.back());
    out.hi.push_back(out.center.back() + out.quantile * out.se.back());
  }
  return out;
}

}  // namespace lrd
