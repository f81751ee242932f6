// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "bica/linalg.hpp"
#include "bica/metrics.hpp"

namespace bica {

namespace {

Matrix reshape_theta(const Vector& theta, Index d) {
  return Eigen::Map<const Matrix>(theta.data(), d, d);
}

Vector vec_matrix(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

}  // namespace

NoiselessModel::NoiselessModel(std::vector<SourceFamily> fams, Matrix w0)
    : families(std::move(fams)), W0(std::move(w0)) {
  if (W0.rows() != W0.cols() || static_cast<Index>(families.size()) != W0.rows()) {
    throw InvalidParameterError("NoiselessModel: need one family per row of W0");
  }
  int gaussians = 0;
  for (const auto& f : families) {
    gaussians += f.kind() == FamilyKind::Gaussian ? 1 : 0;
  }
  if (gaussians > 1) {
    throw InvalidParameterError("NoiselessModel: at most one Gaussian source");
  }
  A0 = lu_det_inverse(W0).inverse;
}

Matrix sample_model(const NoiselessModel& model, Index n, RngStream& rng) {
  const Index d = model.dim();
  Matrix s(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) {
      s(i, k) = model.families[static_cast<size_t>(k)].sample(rng);
    }
  }
  return s * model.A0.transpose();
}

double loglik_noiseless(const Matrix& w, const Matrix& x, const NoiselessModel& model) {
  const double det = w.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw SingularMatrixError("loglik_noiseless: singular W");
  }
  const Index n = x.rows();
  const Matrix u = x * w.transpose();
  double total = static_cast<double>(n) * std::log(std::abs(det));
  for (Index k = 0; k < model.dim(); ++k) {
    const auto& family = model.families[static_cast<size_t>(k)];
    for (Index i = 0; i < n; ++i) {
      total += family.log_density(u(i, k));
    }
  }
  return total;
}

Vector score_theta(const Matrix& w, const Vector& x, const NoiselessModel& model) {
  const Index d = model.dim();
  const Matrix w_inv = lu_det_inverse(w).inverse;
  const Vector u = w * x;
  Vector psi(d);
  for (Index k = 0; k < d; ++k) {
    psi(k) = model.families[static_cast<size_t>(k)].psi(u(k));
  }
  const Matrix score = w_inv.transpose() + psi * x.transpose();
  return vec_matrix(score);
}

Matrix hessian_theta(const Matrix& w, const Vector& x, const NoiselessModel& model) {
  const Index d = model.dim();
  const Matrix w_inv = lu_det_inverse(w).inverse;
  const Vector u = w * x;
  Vector psi_p(d);
  for (Index k = 0; k < d; ++k) {
    psi_p(k) = model.families[static_cast<size_t>(k)].psi_prime(u(k));
  }
  Matrix h(d * d, d * d);
  // theta index p = i + j d for W_ij (column-major vec).
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const Index p = i + j * d;
      for (Index k = 0; k < d; ++k) {
        for (Index l = 0; l < d; ++l) {
          const Index q = k + l * d;
          // D^2 log|det W| [E_ij, E_kl] = -(W^{-1})_{jk} (W^{-1})_{li}.
          double v = -w_inv(j, k) * w_inv(l, i);
          if (i == k) {
            v += psi_p(i) * x(j) * x(l);
          }
          h(p, q) = v;
        }
      }
    }
  }
  return h;
}

IbpReport check_ibp(const NoiselessModel& model, int mc_draws, RngStream& rng) {
  if (mc_draws < 10000) {
    throw InvalidParameterError("check_ibp: need at least 1e4 draws");
  }
  const Index d = model.dim();
  IbpReport report;
  report.draws = mc_draws;
  Matrix sum = Matrix::Zero(d, d);
  Matrix sumsq = Matrix::Zero(d, d);
  Vector s(d);
  Vector psi(d);
  for (int it = 0; it < mc_draws; ++it) {
    for (Index k = 0; k < d; ++k) {
      s(k) = model.families[static_cast<size_t>(k)].sample(rng);
      psi(k) = model.families[static_cast<size_t>(k)].psi(s(k));
    }
    const Matrix outer = psi * s.transpose();
    sum += outer;
    sumsq += outer.cwiseProduct(outer);
  }
  const double n = static_cast<double>(mc_draws);
  report.cross_mean = sum / n;
  report.cross_se =
      ((sumsq / n - report.cross_mean.cwiseProduct(report.cross_mean)) / n)
          .cwiseMax(0.0)
          .cwiseSqrt();
  report.diag_mean = report.cross_mean.diagonal();
  report.diag_se = report.cross_se.diagonal();

  report.pass = true;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double target = i == j ? -1.0 : 0.0;
      if (std::abs(report.cross_mean(i, j) - target) > 4.0 * report.cross_se(i, j)) {
        report.pass = false;
      }
    }
  }
  for (const auto& f : model.families) {
    if (f.kind() == FamilyKind::Laplace || f.kind() == FamilyKind::Mixed) {
      report.smoothness_caveat = true;
    }
  }
  return report;
}

FisherInfo fisher_info_mc(const NoiselessModel& model, int mc_draws, RngStream& rng) {
  if (mc_draws < 10000) {
    throw InvalidParameterError("fisher_info_mc: need at least 1e4 draws");
  }
  const Index d = model.dim();
  const Index p = d * d;
  FisherInfo info;
  info.mc_draws = mc_draws;

  Matrix neg_h_sum = Matrix::Zero(p, p);
  Matrix neg_h_sumsq = Matrix::Zero(p, p);
  Matrix outer_sum = Matrix::Zero(p, p);
  Vector score_sum = Vector::Zero(p);
  Matrix gap_sum = Matrix::Zero(p, p);
  Matrix gap_sumsq = Matrix::Zero(p, p);

  for (int it = 0; it < mc_draws; ++it) {
    const Matrix x_one = sample_model(model, 1, rng);
    const Vector x = x_one.row(0).transpose();
    const Matrix neg_h = -hessian_theta(model.W0, x, model);
    const Vector u = score_theta(model.W0, x, model);
    const Matrix uut = u * u.transpose();
    neg_h_sum += neg_h;
    neg_h_sumsq += neg_h.cwiseProduct(neg_h);
    outer_sum += uut;
    score_sum += u;
    const Matrix gap = neg_h - uut;
    gap_sum += gap;
    gap_sumsq += gap.cwiseProduct(gap);
  }

  const double n = static_cast<double>(mc_draws);
  Matrix mean_h = neg_h_sum / n;
  info.matrix = 0.5 * (mean_h + mean_h.transpose());
  info.matrix_se =
      ((neg_h_sumsq / n - mean_h.cwiseProduct(mean_h)) / n).cwiseMax(0.0).cwiseSqrt();
  const Vector score_mean = score_sum / n;
  info.score_outer = outer_sum / n - score_mean * score_mean.transpose();
  info.equality_gap_mean = gap_sum / n;
  info.equality_gap_se =
      ((gap_sumsq / n - info.equality_gap_mean.cwiseProduct(info.equality_gap_mean)) / n)
          .cwiseMax(0.0)
          .cwiseSqrt();
  info.standard_error_scale = info.matrix_se.maxCoeff();
  return info;
}

double lan_remainder(const NoiselessModel& model, Index n, const Vector& h,
                     const Matrix& fisher, RngStream& rng) {
  const Index d = model.dim();
  if (h.size() != d * d) {
    throw InvalidParameterError("lan_remainder: h must have d^2 entries");
  }
  const Matrix x = sample_model(model, n, rng);
  const Vector theta0 = vec_matrix(model.W0);
  const Vector theta = theta0 + h / std::sqrt(static_cast<double>(n));
  const Matrix w_local = reshape_theta(theta, d);

  const double delta_l =
      loglik_noiseless(w_local, x, model) - loglik_noiseless(model.W0, x, model);

  Vector score_sum = Vector::Zero(d * d);
  for (Index i = 0; i < n; ++i) {
    score_sum += score_theta(model.W0, x.row(i).transpose(), model);
  }
  const Vector s_n = score_sum / std::sqrt(static_cast<double>(n));

  return delta_l - h.dot(s_n) + 0.5 * h.dot(fisher * h);
}

RwmResult rwm_posterior(const Matrix& x, const NoiselessModel& model, double prior_sd,
                        int iters, int burn_in, double step_scale, RngStream& rng) {
  if (!(prior_sd > 0.0)) {
    throw InvalidParameterError("rwm_posterior: prior_sd must be positive");
  }
  if (iters < 1 || burn_in < 0 || burn_in >= iters) {
    throw InvalidParameterError("rwm_posterior: need 0 <= burn_in < iters");
  }
  const Index d = model.dim();
  const Index p = d * d;
  const Vector theta0 = vec_matrix(model.W0);

  const auto log_target = [&](const Vector& theta) -> double {
    const Matrix w = reshape_theta(theta, d);
    const double det = w.determinant();
    if (det == 0.0 || !std::isfinite(det)) {
      return -std::numeric_limits<double>::infinity();
    }
    const double prior = -0.5 * (theta - theta0).squaredNorm() / (prior_sd * prior_sd);
    if (x.rows() == 0) {
      return prior;
    }
    return loglik_noiseless(w, x, model) + prior;
  };

  bool tune = !(step_scale > 0.0);
  double scale = tune ? 0.1 : step_scale;
  Vector theta = theta0;
  double lp = log_target(theta);

  RwmResult result;
  result.draws.resize(iters - burn_in, p);
  int accepted_total = 0;
  int accepted_window = 0;
  const int window = 200;

  Vector proposal(p);
  for (int m = 0; m < iters; ++m) {
    for (Index j = 0; j < p; ++j) {
      proposal(j) = theta(j) + scale * rng.standard_normal();
    }
    const double lp_new = log_target(proposal);
    const double log_u = std::log(rng.uniform01());
    if (lp_new - lp > log_u) {
      theta = proposal;
      lp = lp_new;
      ++accepted_window;
      if (m >= burn_in) ++accepted_total;
    }
    if (tune && m < burn_in && (m + 1) % window == 0) {
      const double rate = static_cast<double>(accepted_window) / window;
      scale *= std::exp(rate - 0.234);
      accepted_window = 0;
    }
    if (m >= burn_in) {
      result.draws.row(m - burn_in) = theta.transpose();
    }
  }
  result.acceptance_rate = static_cast<double>(accepted_total) /
                           static_cast<double>(iters - burn_in);
  result.step_scale = scale;
  return result;
}

double effective_sample_size(const Vector& chain) {
  const Index n = chain.size();
  if (n < 10) {
    return static_cast<double>(n);
  }
  const double mean = chain.mean();
  const Vector centered = chain.array() - mean;
  const double var = centered.squaredNorm() / static_cast<double>(n);
  if (!(var > 0.0)) {
    return static_cast<double>(n);
  }
  double rho_sum = 0.0;
  const Index max_lag = std::min<Index>(n / 2, 2000);
  for (Index lag = 1; lag < max_lag; ++lag) {
    const double acov =
        centered.head(n - lag).dot(centered.tail(n - lag)) / static_cast<double>(n);
    const double rho = acov / var;
    if (rho < 0.05) {
      break;
    }
    rho_sum += rho;
  }
  return static_cast<double>(n) / (1.0 + 2.0 * rho_sum);
}

BvmReport bvm_report(const RwmResult& chain, const NoiselessModel& model,
                     const FisherInfo& fisher, Index n) {
  const Index m = chain.draws.rows();
  const Index p = chain.draws.cols();
  if (m < 10) {
    throw InsufficientSamplesError("bvm_report: chain too short");
  }

  BvmReport report;
  report.min_ess = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < p; ++j) {
    report.min_ess = std::min(report.min_ess, effective_sample_size(chain.draws.col(j)));
  }
  if (report.min_ess < 200.0) {
    throw InsufficientSamplesError("bvm_report: effective sample size below 200");
  }

  const Eigen::RowVectorXd mean = chain.draws.colwise().mean();
  const Matrix centered = chain.draws.rowwise() - mean;
  const Matrix cov = centered.transpose() * centered / static_cast<double>(m - 1);
  report.scaled_cov = static_cast<double>(n) * cov;
  report.fisher_inv = lu_det_inverse(fisher.matrix).inverse;

  report.diag_rel_err.resize(p);
  for (Index j = 0; j < p; ++j) {
    report.diag_rel_err(j) = std::abs(report.scaled_cov(j, j) - report.fisher_inv(j, j)) /
                             report.fisher_inv(j, j);
  }
  report.max_diag_rel_err = report.diag_rel_err.maxCoeff();

  // Marginal normality on a thinned, near-independent subsample.
  const Index stride = std::max<Index>(1, m / 1000);
  const Index m_thin = (m + stride - 1) / stride;
  report.ks_stats.resize(p);
  std::vector<double> sample;
  sample.reserve(static_cast<size_t>(m_thin));
  for (Index j = 0; j < p; ++j) {
    sample.clear();
    for (Index i = 0; i < m; i += stride) {
      sample.push_back(chain.draws(i, j));
    }
    const double mu = std::accumulate(sample.begin(), sample.end(), 0.0) /
                      static_cast<double>(sample.size());
    double ss = 0.0;
    for (const double v : sample) {
      ss += (v - mu) * (v - mu);
    }
    const double sd = std::sqrt(ss / static_cast<double>(sample.size() - 1));
    std::sort(sample.begin(), sample.end());
    double d_stat = 0.0;
    const auto norm_cdf = [](double t) { return 0.5 * std::erfc(-t * std::numbers::sqrt2 / 2.0); };
    for (size_t i = 0; i < sample.size(); ++i) {
      const double z = (sample[i] - mu) / sd;
      const double f = norm_cdf(z);
      const double lo = static_cast<double>(i) / static_cast<double>(sample.size());
      const double hi = static_cast<double>(i + 1) / static_cast<double>(sample.size());
      d_stat = std::max({d_stat, std::abs(f - lo), std::abs(f - hi)});
    }
    report.ks_stats(j) = d_stat;
  }
  report.ks_critical_alpha01 = 1.62762 / std::sqrt(static_cast<double>(m_thin));

  const Index d = model.dim();
  std::vector<double> dpm(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const Matrix w = reshape_theta(chain.draws.row(i).transpose(), d);
    dpm[static_cast<size_t>(i)] = signed_perm_distance(w, model.W0);
  }
  std::sort(dpm.begin(), dpm.end());
  for (const double q : {0.5, 0.9}) {
    const auto idx = static_cast<size_t>(q * (static_cast<double>(m) - 1.0));
    report.dpm_quantiles[q] = dpm[idx];
  }
  return report;
}

}  // namespace bica
