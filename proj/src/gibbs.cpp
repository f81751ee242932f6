// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/gibbs.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <numbers>

#include "bica/distributions.hpp"
#include "bica/linalg.hpp"

namespace bica {

namespace {

constexpr double kTauFloor = 1e-12;

Eigen::LLT<Matrix> checked_llt(const Matrix& m, const char* where) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(std::string(where) + ": conditional precision is not positive definite");
  }
  return llt;
}

// Draw from N(mu, M^{-1}) given the Cholesky factorization M = L L^T:
// mu + L^{-T} z has covariance L^{-T} L^{-1} = M^{-1}.
Vector precision_normal_draw(const Eigen::LLT<Matrix>& llt, const Vector& mu,
                             RngStream& rng) {
  Vector z(mu.size());
  for (Index i = 0; i < z.size(); ++i) {
    z(i) = rng.standard_normal();
  }
  return mu + llt.matrixU().solve(z);
}

}  // namespace

GaussianConditional source_conditional(const Matrix& a, const Vector& prior_precision,
                                       const Vector& x_row, double sigma) {
  const double inv_s2 = 1.0 / (sigma * sigma);
  Matrix precision = inv_s2 * (a.transpose() * a);
  precision.diagonal() += prior_precision;
  const Matrix cov = solve_spd(precision, Matrix::Identity(a.cols(), a.cols()));
  return GaussianConditional{inv_s2 * (cov * (a.transpose() * x_row)), cov};
}

GaussianConditional mixing_conditional(const Matrix& s, const Vector& x_col,
                                       double sigma, double sigma2) {
  const double inv_s2 = 1.0 / (sigma * sigma);
  Matrix precision = inv_s2 * (s.transpose() * s);
  precision.diagonal().array() += 1.0 / (sigma2 * sigma2);
  const Matrix cov = solve_spd(precision, Matrix::Identity(s.cols(), s.cols()));
  return GaussianConditional{inv_s2 * (cov * (s.transpose() * x_col)), cov};
}

SigmaConditional sigma_conditional_params(const Matrix& x, const Matrix& s, const Matrix& a) {
  const double rss = (x - s * a.transpose()).squaredNorm();
  return SigmaConditional{0.5 * static_cast<double>(x.cols()) * static_cast<double>(x.rows()),
                          0.5 * rss};
}

GibbsState gibbs_ice_init(const Matrix& x) {
  GibbsState state;
  state.S = x;
  state.A = Matrix::Identity(x.cols(), x.cols());
  state.T = Matrix::Constant(x.rows(), x.cols(), 0.25);
  return state;
}

void gibbs_ice_step(GibbsState& state, const Matrix& x, const GibbsConfig& cfg,
                    RngStream& rng) {
  const Index n = x.rows();
  const Index d = x.cols();
  const double inv_s2 = 1.0 / (cfg.sigma * cfg.sigma);

  // (1) Source rows. Precision sigma^{-2} A^T A + D_i with D_i = diag(4 tau_i).
  const Matrix gram = inv_s2 * (state.A.transpose() * state.A);
  const Matrix atx = inv_s2 * (x * state.A);  // row i = (sigma^{-2} A^T x_i)^T
  Matrix precision(d, d);
  for (Index i = 0; i < n; ++i) {
    precision = gram;
    precision.diagonal() += 4.0 * state.T.row(i).transpose();
    const auto llt = checked_llt(precision, "gibbs_ice_step[S]");
    const Vector mu = llt.solve(atx.row(i).transpose());
    state.S.row(i) = precision_normal_draw(llt, mu, rng).transpose();
  }

  // (2) Mixing columns share one covariance.
  Matrix a_precision = inv_s2 * (state.S.transpose() * state.S);
  a_precision.diagonal().array() += 1.0 / (cfg.sigma2 * cfg.sigma2);
  const auto a_llt = checked_llt(a_precision, "gibbs_ice_step[A]");
  const Matrix stx = inv_s2 * (state.S.transpose() * x);  // col k = sigma^{-2} S^T x_{. k}
  for (Index k = 0; k < d; ++k) {
    const Vector mu = a_llt.solve(stx.col(k));
    state.A.col(k) = precision_normal_draw(a_llt, mu, rng);
  }

  // (3) Polya-Gamma scales.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      state.T(i, j) = std::max(sample_pg1(std::abs(2.0 * state.S(i, j)), rng), kTauFloor);
    }
  }

  if (!state.S.allFinite() || !state.A.allFinite()) {
    throw NonFiniteError("gibbs_ice_step: drawn state has non-finite entries");
  }
}

double log_joint_collapsed(const Matrix& x, const GibbsState& state, double sigma,
                           double sigma2) {
  const double n = static_cast<double>(x.rows());
  const double d = static_cast<double>(x.cols());
  const double rss = (x - state.S * state.A.transpose()).squaredNorm();
  double lp = -0.5 * rss / (sigma * sigma) -
              n * d * (std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi));
  for (Index i = 0; i < state.S.rows(); ++i) {
    for (Index j = 0; j < state.S.cols(); ++j) {
      lp += -std::log(std::numbers::pi) - log_cosh(state.S(i, j));
    }
  }
  lp += -0.5 * state.A.squaredNorm() / (sigma2 * sigma2) -
        d * d * (std::log(sigma2) + 0.5 * std::log(2.0 * std::numbers::pi));
  return lp;
}

namespace {

void validate_chain_config(int iterations, int burn_in, int thin) {
  if (iterations < 1 || burn_in < 0 || burn_in >= iterations || thin < 1) {
    throw InvalidParameterError("gibbs: need 0 <= burn_in < iterations and thin >= 1");
  }
}

}  // namespace

Trace run_gibbs_ice(const Matrix& x, const GibbsConfig& cfg) {
  if (x.rows() <= x.cols()) {
    throw InvalidParameterError("run_gibbs_ice: need N > d");
  }
  validate_chain_config(cfg.iterations, cfg.burn_in, cfg.thin);
  if (!(cfg.sigma > 0.0) || !(cfg.sigma2 > 0.0)) {
    throw InvalidParameterError("run_gibbs_ice: sigma and sigma2 must be positive");
  }

  RngStream rng(cfg.seed, 0);
  GibbsState state = gibbs_ice_init(x);
  Trace trace;
  trace.config = cfg;
  const int kept = (cfg.iterations - cfg.burn_in) / cfg.thin;
  trace.A_draws.reserve(static_cast<size_t>(kept));
  trace.S_draws.reserve(static_cast<size_t>(kept));

  for (int m = 1; m <= cfg.iterations; ++m) {
    gibbs_ice_step(state, x, cfg, rng);
    const double lj = log_joint_collapsed(x, state, cfg.sigma, cfg.sigma2);
    trace.log_joint_all.push_back(lj);
    if (m > cfg.burn_in && (m - cfg.burn_in) % cfg.thin == 0) {
      trace.A_draws.push_back(state.A);
      trace.S_draws.push_back(state.S);
      trace.log_joint_kept.push_back(lj);
      trace.kept_iterations.push_back(m);
    }
  }
  return trace;
}

Trace run_student_t_gibbs(const Matrix& x, const StudentTGibbsConfig& cfg) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (n <= d) {
    throw InvalidParameterError("run_student_t_gibbs: need N > d");
  }
  validate_chain_config(cfg.iterations, cfg.burn_in, cfg.thin);
  if (cfg.alpha.size() != d || cfg.lambda.size() != d) {
    throw InvalidParameterError("run_student_t_gibbs: alpha and lambda must have one entry per source");
  }
  if (cfg.alpha.minCoeff() <= 0.0 || cfg.lambda.minCoeff() <= 0.0) {
    throw InvalidParameterError("run_student_t_gibbs: alpha and lambda must be positive");
  }

  RngStream rng(cfg.seed, 0);
  Matrix s = x;
  Matrix a = Matrix::Identity(d, d);
  Matrix v = Matrix::Ones(n, d);
  double sigma = 1.0;

  Trace trace;
  trace.config.iterations = cfg.iterations;
  trace.config.burn_in = cfg.burn_in;
  trace.config.thin = cfg.thin;
  trace.config.seed = cfg.seed;

  const auto t_log_prior = [&](const Matrix& src) {
    double lp = 0.0;
    for (Index j = 0; j < d; ++j) {
      const double alpha_j = cfg.alpha(j);
      const double lambda_j = cfg.lambda(j);
      const double log_norm = std::lgamma(0.5 * (alpha_j + 1.0)) - std::lgamma(0.5 * alpha_j) -
                              0.5 * std::log(alpha_j * std::numbers::pi) - std::log(lambda_j);
      for (Index i = 0; i < n; ++i) {
        const double u = src(i, j) / lambda_j;
        lp += log_norm - 0.5 * (alpha_j + 1.0) * std::log1p(u * u / alpha_j);
      }
    }
    return lp;
  };

  for (int m = 1; m <= cfg.iterations; ++m) {
    // Sources.
    const double inv_s2 = 1.0 / (sigma * sigma);
    const Matrix gram = inv_s2 * (a.transpose() * a);
    const Matrix atx = inv_s2 * (x * a);
    Matrix precision(d, d);
    for (Index i = 0; i < n; ++i) {
      precision = gram;
      precision.diagonal() += v.row(i).transpose().cwiseInverse();
      const auto llt = checked_llt(precision, "run_student_t_gibbs[S]");
      const Vector mu = llt.solve(atx.row(i).transpose());
      s.row(i) = precision_normal_draw(llt, mu, rng).transpose();
    }

    // Mixing matrix, flat-prior conditional: rows of A are independent
    // N((S^T S)^{-1} S^T x_{. r}, sigma^2 (S^T S)^{-1}).
    const Matrix sts = inv_s2 * (s.transpose() * s);
    const auto a_llt = checked_llt(sts, "run_student_t_gibbs[A]");
    const Matrix stx = inv_s2 * (s.transpose() * x);
    for (Index r = 0; r < d; ++r) {
      const Vector mu = a_llt.solve(stx.col(r));
      a.row(r) = precision_normal_draw(a_llt, mu, rng).transpose();
    }

    // Noise SD: sigma ~ sqrt(InvGamma(d N / 2, rss / 2)).
    const auto sc = sigma_conditional_params(x, s, a);
    const double g = rng.gamma(cfg.a_sigma + sc.shape);
    sigma = std::sqrt((cfg.b_sigma + sc.rate) / g);
    sigma = std::max(sigma, 1e-8);

    // Local scales: v_ij ~ InvGamma((alpha_j + 1)/2, (s_ij^2 + alpha_j lambda_j^2)/2).
    for (Index j = 0; j < d; ++j) {
      const double shape = 0.5 * (cfg.alpha(j) + 1.0);
      const double base = cfg.alpha(j) * cfg.lambda(j) * cfg.lambda(j);
      for (Index i = 0; i < n; ++i) {
        const double rate = 0.5 * (s(i, j) * s(i, j) + base);
        v(i, j) = rate / rng.gamma(shape);
      }
    }

    if (!s.allFinite() || !a.allFinite() || !std::isfinite(sigma)) {
      throw NonFiniteError("run_student_t_gibbs: drawn state has non-finite entries");
    }

    const double nd = static_cast<double>(n) * static_cast<double>(d);
    const double lj = -0.5 * (x - s * a.transpose()).squaredNorm() / (sigma * sigma) -
                      nd * (std::log(sigma) + 0.5 * std::log(2.0 * std::numbers::pi)) +
                      t_log_prior(s);
    trace.log_joint_all.push_back(lj);
    if (m > cfg.burn_in && (m - cfg.burn_in) % cfg.thin == 0) {
      trace.A_draws.push_back(a);
      trace.S_draws.push_back(s);
      trace.log_joint_kept.push_back(lj);
      trace.kept_iterations.push_back(m);
    }
  }
  return trace;
}

PosteriorSummary posterior_summary(const Trace& trace) {
  if (trace.A_draws.empty() || trace.S_draws.empty()) {
    throw InsufficientSamplesError("posterior_summary: empty trace");
  }
  Matrix a_mean = Matrix::Zero(trace.A_draws.front().rows(), trace.A_draws.front().cols());
  for (const auto& a : trace.A_draws) {
    a_mean += a;
  }
  a_mean /= static_cast<double>(trace.A_draws.size());

  Matrix s_mean = Matrix::Zero(trace.S_draws.front().rows(), trace.S_draws.front().cols());
  for (const auto& s : trace.S_draws) {
    s_mean += s;
  }
  s_mean /= static_cast<double>(trace.S_draws.size());

  return PosteriorSummary{a_mean, lu_det_inverse(a_mean).inverse, s_mean};
}

}  // namespace bica
