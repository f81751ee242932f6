// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <map>
#include <vector>

#include "bica/core.hpp"
#include "bica/distributions.hpp"
#include "bica/rng.hpp"

namespace bica {

/// Noiseless known-source model p_W(x) = |det W| prod_k p_k(w_k^T x).
/// At most one family may be Gaussian; W0 must be nonsingular. Parameters
/// are theta = vec(W) in column-major order throughout this module.
struct NoiselessModel {
  std::vector<SourceFamily> families;
  Matrix W0;
  Matrix A0;  // W0^{-1}, cached

  NoiselessModel(std::vector<SourceFamily> fams, Matrix w0);
  Index dim() const { return W0.rows(); }
};

/// Draw n observations X = S A0^T (rows are observations).
Matrix sample_model(const NoiselessModel& model, Index n, RngStream& rng);

/// sum_n [ log |det W| + sum_k log p_k(w_k^T x^(n)) ].
double loglik_noiseless(const Matrix& w, const Matrix& x, const NoiselessModel& model);

/// vec of the matrix score (W^{-1})^T + psi(W x) x^T at one observation.
Vector score_theta(const Matrix& w, const Vector& x, const NoiselessModel& model);

/// Analytic per-sample Hessian of the log-likelihood in theta.
Matrix hessian_theta(const Matrix& w, const Vector& x, const NoiselessModel& model);

/// Monte Carlo check of the integration-by-parts identities
/// E[psi_k(S_k) S_k] = -1 and E[psi(S) S^T] = -I.
struct IbpReport {
  Vector diag_mean;       // estimates of E[psi_k(S_k) S_k]
  Vector diag_se;
  Matrix cross_mean;      // estimate of E[psi(S) S^T]
  Matrix cross_se;
  int draws = 0;
  bool pass = false;      // every residual within 4 SE
  bool smoothness_caveat = false;  // a family violates C^3 smoothness at 0
};
IbpReport check_ibp(const NoiselessModel& model, int mc_draws, RngStream& rng);

/// Fisher information at W0 by Monte Carlo over analytic per-sample
/// Hessians, plus the score-outer-product estimate for the information
/// equality check. equality_gap_mean/se track the per-entry difference
/// (-H) - U U^T over the same draws.
struct FisherInfo {
  Matrix matrix;        // -E[Hessian], symmetrized
  Matrix matrix_se;     // per-entry Monte Carlo SE
  Matrix score_outer;   // Var(score)
  Matrix equality_gap_mean;
  Matrix equality_gap_se;
  int mc_draws = 0;
  double standard_error_scale = 0.0;  // max entry SE
};
FisherInfo fisher_info_mc(const NoiselessModel& model, int mc_draws, RngStream& rng);

/// LAN remainder r_N(h) = [L_N(theta0 + h/sqrt(N)) - L_N(theta0)]
/// - [h^T S_N - h^T I h / 2] on one simulated dataset of size N.
double lan_remainder(const NoiselessModel& model, Index n, const Vector& h,
                     const Matrix& fisher, RngStream& rng);

/// Random-walk Metropolis on theta targeting the exact posterior
/// exp(L_N(theta)) N(theta; vec(W0), prior_sd^2 I). Singular proposals
/// count as rejections. step_scale <= 0 enables 0.234-target tuning on
/// burn-in.
struct RwmResult {
  Matrix draws;  // (iters - burn_in) x d^2, post burn-in
  double acceptance_rate = 0.0;
  double step_scale = 0.0;
};
RwmResult rwm_posterior(const Matrix& x, const NoiselessModel& model, double prior_sd,
                        int iters, int burn_in, double step_scale, RngStream& rng);

/// Bernstein-von Mises diagnostics from one chain: N x posterior covariance
/// against I^{-1}, per-marginal KS statistics of standardized draws, and
/// posterior quantiles of d_pm(W, W0).
struct BvmReport {
  Matrix scaled_cov;          // N * cov(theta draws)
  Matrix fisher_inv;
  Vector diag_rel_err;        // per-coordinate |scaled - inv| / inv on the diagonal
  double max_diag_rel_err = 0.0;
  Vector ks_stats;            // thinned, standardized draws vs the normal CDF
  double ks_critical_alpha01 = 0.0;
  std::map<double, double> dpm_quantiles;  // quantile level -> d_pm value
  double min_ess = 0.0;
};
BvmReport bvm_report(const RwmResult& chain, const NoiselessModel& model,
                     const FisherInfo& fisher, Index n);

/// Effective sample size from the initial positive autocorrelation sum.
double effective_sample_size(const Vector& chain);

}  // namespace bica
