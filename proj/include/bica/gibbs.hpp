// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <optional>
#include <vector>

#include "bica/core.hpp"
#include "bica/rng.hpp"

namespace bica {

struct GibbsConfig {
  int iterations = 4000;
  int burn_in = 2000;
  int thin = 5;
  double sigma = 0.01;   // noise SD, fixed input of the sampler
  double sigma2 = 1.0;   // prior SD of the mixing matrix columns
  std::uint64_t seed = 0;
};

/// One Markov-chain state: sources S (N x d), mixing A (d x d), and the
/// latent Polya-Gamma scales T (N x d, strictly positive).
struct GibbsState {
  Matrix S;
  Matrix A;
  Matrix T;
};

struct StudentTGibbsConfig {
  int iterations = 4000;
  int burn_in = 2000;
  int thin = 5;
  std::uint64_t seed = 0;
  Vector alpha;   // per-source degrees of freedom
  Vector lambda;  // per-source scale (fixed; no hyperparameter updates)
  double a_sigma = 0.0;  // noise-variance prior shape offset
  double b_sigma = 0.0;  // noise-variance prior rate offset
};

/// Kept draws of a chain. S draws are stored next to A draws; the log joint
/// is recorded once per iteration with the latent scales integrated out
/// (the sech marginal for Gibbs-ICE, the Student-t marginal for the t
/// sampler), so it is closed form and finite whenever the state is.
struct Trace {
  std::vector<Matrix> A_draws;
  std::vector<Matrix> S_draws;
  std::vector<double> log_joint_kept;
  std::vector<int> kept_iterations;
  std::vector<double> log_joint_all;
  GibbsConfig config;  // echo for Gibbs-ICE traces; t-config echoed separately
};

struct GaussianConditional {
  Vector mean;
  Matrix covariance;
};

/// Full conditional of one source row: precision sigma^{-2} A^T A +
/// diag(prior_precision), mean sigma^{-2} Sigma A^T x. Gibbs-ICE passes
/// prior precision 4 tau_i, the Student-t sampler passes 1 / v_i.
GaussianConditional source_conditional(const Matrix& a, const Vector& prior_precision,
                                       const Vector& x_row, double sigma);

/// Full conditional of one mixing column: shared covariance
/// (sigma^{-2} S^T S + sigma2^{-2} I)^{-1}, mean sigma^{-2} Sigma S^T x_col.
GaussianConditional mixing_conditional(const Matrix& s, const Vector& x_col,
                                       double sigma, double sigma2);

/// Parameters of the Student-t sampler's noise conditional
/// sigma^2 ~ InvGamma(shape, rate) with shape = d N / 2 (plus prior offset)
/// and rate = sum of squared residuals / 2.
struct SigmaConditional {
  double shape;
  double rate;
};
SigmaConditional sigma_conditional_params(const Matrix& x, const Matrix& s, const Matrix& a);

/// Deterministic initialization: A = I, S = X, T = 1/4 (the PG(1,0) mean).
GibbsState gibbs_ice_init(const Matrix& x);

/// One full sweep of Algorithm Gibbs-ICE: rows of S, then columns of A,
/// then tau_ij ~ PG(1, |2 s_ij|). T entries are floored at 1e-12.
void gibbs_ice_step(GibbsState& state, const Matrix& x, const GibbsConfig& cfg,
                    RngStream& rng);

Trace run_gibbs_ice(const Matrix& x, const GibbsConfig& cfg);

/// Four-block Student-t scale-mixture sampler: sources, mixing matrix
/// (flat-prior conditional), noise SD, local scales v_ij. The per-source
/// scales lambda are fixed configuration.
Trace run_student_t_gibbs(const Matrix& x, const StudentTGibbsConfig& cfg);

struct PosteriorSummary {
  Matrix A_mean;
  Matrix W_mean;  // inverse of A_mean, not the mean of inverses
  Matrix S_mean;
};
PosteriorSummary posterior_summary(const Trace& trace);

/// Log joint of (X, S, A) with the PG scales integrated out:
/// Gaussian likelihood + sech source prior + Gaussian prior on A's columns.
double log_joint_collapsed(const Matrix& x, const GibbsState& state, double sigma,
                           double sigma2);

}  // namespace bica
