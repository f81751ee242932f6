// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/optim.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

#include "bica/distributions.hpp"
#include "bica/linalg.hpp"
#include "bica/rng.hpp"

namespace bica {

double sech_objective(const Matrix& w, const Matrix& x) {
  const double det = w.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw SingularMatrixError("sech_objective: |det W| underflowed");
  }
  const Matrix u = x * w.transpose();  // row n = (W x^(n))^T
  double src = 0.0;
  for (Index i = 0; i < u.rows(); ++i) {
    for (Index j = 0; j < u.cols(); ++j) {
      src += log_cosh(u(i, j));
    }
  }
  return std::log(std::abs(det)) - src / static_cast<double>(x.rows());
}

namespace {

std::vector<Matrix> weighted_covariances(const Matrix& x, const Matrix& weights) {
  const Index n = x.rows();
  const Index d = x.cols();
  std::vector<Matrix> z(static_cast<size_t>(d));
  for (Index i = 0; i < d; ++i) {
    // Z_i = Y^T Y / n with Y = sqrt(weight) * x rows; exactly symmetric PSD.
    const Matrix y = weights.col(i).cwiseSqrt().asDiagonal() * x;
    Matrix zi = Matrix::Zero(d, d);
    zi.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose(), 1.0 / static_cast<double>(n));
    zi.triangularView<Eigen::StrictlyUpper>() = zi.transpose();
    z[static_cast<size_t>(i)] = std::move(zi);
  }
  return z;
}

}  // namespace

std::vector<Matrix> em_estep(const Matrix& w, const Matrix& x) {
  const Matrix u = x * w.transpose();
  const Matrix weights = u.unaryExpr([](double v) { return 0.5 * tanh_over_x(v); });
  return weighted_covariances(x, weights);
}

Matrix em_mstep(const std::vector<Matrix>& z, const Matrix& w_current) {
  const Index d = w_current.rows();
  if (static_cast<Index>(z.size()) != d) {
    throw InvalidParameterError("em_mstep: need one Z_i per row");
  }
  Matrix w = w_current;
  for (Index i = 0; i < d; ++i) {
    const Matrix& zi = z[static_cast<size_t>(i)];
    Matrix m = w * zi;
    Eigen::PartialPivLU<Matrix> lu(m);
    double scale = m.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) ||
        lu.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-12 * scale) {
      m = w * (zi + 1e-10 * Matrix::Identity(d, d));
      lu.compute(m);
      scale = m.cwiseAbs().maxCoeff();
      if (!(scale > 0.0) ||
          lu.matrixLU().diagonal().cwiseAbs().minCoeff() < 1e-12 * scale) {
        throw SingularMatrixError("em_mstep: W Z_i singular after regularization");
      }
    }
    const Vector direction = lu.solve(Vector::Unit(d, i));
    const double q = direction.dot(zi * direction);
    if (!(q > 0.0)) {
      throw SingularMatrixError("em_mstep: degenerate quadratic form");
    }
    w.row(i) = (direction / std::sqrt(2.0 * q)).transpose();
  }
  return w;
}

EmState run_em(const Matrix& x, const Matrix& w0, int max_iter, double tol) {
  if (max_iter < 1 || !(tol > 0.0)) {
    throw InvalidParameterError("run_em: need max_iter >= 1 and tol > 0");
  }
  EmState state;
  state.W = w0;
  state.loglik = sech_objective(w0, x);
  state.objective_history.push_back(state.loglik);
  for (int it = 1; it <= max_iter; ++it) {
    state.W = em_mstep(em_estep(state.W, x), state.W);
    const double obj = sech_objective(state.W, x);
    state.iterations = it;
    if (obj < state.loglik - 1e-8) {
      throw DivergedError("run_em: objective decreased; envelope guarantee violated");
    }
    const double delta = obj - state.loglik;
    state.loglik = obj;
    state.objective_history.push_back(obj);
    if (std::abs(delta) < tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

double ono_envelope(double s, double r) {
  const double weight = 0.5 * tanh_over_x(r);
  return weight * s * s + log_cosh(r) - 0.5 * r * std::tanh(r);
}

Matrix ono_update(const Matrix& w, const Matrix& x) {
  const Matrix u = x * w.transpose();
  // Tight slack r = |u| per sample, envelope weight phi'(r)/(2r).
  const Matrix weights = u.unaryExpr([](double v) {
    const double r = std::abs(v);
    return 0.5 * tanh_over_x(r);
  });
  return em_mstep(weighted_covariances(x, weights), w);
}

Matrix mackay_step(const Matrix& w, const Matrix& x_batch, double eta) {
  if (!(eta >= 0.0)) {
    throw InvalidParameterError("mackay_step: eta must be nonnegative");
  }
  const double det = w.determinant();
  if (det == 0.0 || !std::isfinite(det)) {
    throw SingularMatrixError("mackay_step: |det W| underflowed");
  }
  const Matrix a = x_batch * w.transpose();
  const Matrix g = a.array().tanh().matrix().transpose() * a /
                   static_cast<double>(x_batch.rows());
  const Index d = w.rows();
  return w + eta * (Matrix::Identity(d, d) - g) * w;
}

EmState run_mackay(const Matrix& x, const Matrix& w0, double eta, int max_iter,
                   double tol) {
  if (!(eta > 0.0) || max_iter < 1 || !(tol > 0.0)) {
    throw InvalidParameterError("run_mackay: need eta > 0, max_iter >= 1, tol > 0");
  }
  EmState state;
  state.W = w0;
  state.loglik = sech_objective(w0, x);
  state.objective_history.push_back(state.loglik);
  for (int it = 1; it <= max_iter; ++it) {
    state.W = mackay_step(state.W, x, eta);
    const double obj = sech_objective(state.W, x);
    state.iterations = it;
    const double delta = obj - state.loglik;
    state.loglik = obj;
    state.objective_history.push_back(obj);
    if (std::abs(delta) < tol) {
      state.converged = true;
      break;
    }
  }
  return state;
}

FastIcaResult fastica(const Matrix& x, int max_iter, double tol, std::uint64_t seed) {
  const Index n = x.rows();
  const Index d = x.cols();
  if (n <= d) {
    throw InvalidParameterError("fastica: need N > d");
  }
  if (max_iter < 1 || !(tol > 0.0)) {
    throw InvalidParameterError("fastica: need max_iter >= 1 and tol > 0");
  }

  FastIcaResult result;
  result.mean = x.colwise().mean();
  const Matrix xc = x.rowwise() - result.mean.transpose();

  // Whitening K = D^{-1/2} E^T from the covariance eigendecomposition.
  Matrix cov = Matrix::Zero(d, d);
  cov.selfadjointView<Eigen::Lower>().rankUpdate(xc.transpose(), 1.0 / static_cast<double>(n));
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
  if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff()) {
    throw NotPositiveDefiniteError("fastica: data covariance is rank deficient");
  }
  const Matrix k = es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose();
  const Matrix z = xc * k.transpose();

  // Random orthonormal start.
  RngStream rng(seed, 0);
  Matrix w(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      w(i, j) = rng.standard_normal();
    }
  }
  w = Eigen::HouseholderQR<Matrix>(w).householderQ() * Matrix::Identity(d, d);

  for (int it = 1; it <= max_iter; ++it) {
    const Matrix u = z * w.transpose();
    const Matrix g = u.array().tanh().matrix();
    const Vector g_prime_mean =
        (1.0 - g.array().square()).colwise().mean().matrix().transpose();
    Matrix w_new = g.transpose() * z / static_cast<double>(n) -
                   g_prime_mean.asDiagonal() * w;
    w_new = inverse_sqrt_spd(w_new * w_new.transpose()) * w_new;

    const double delta =
        1.0 - (w_new * w.transpose()).diagonal().cwiseAbs().minCoeff();
    w = w_new;
    result.iterations = it;
    if (delta < tol) {
      result.converged = true;
      break;
    }
  }

  result.W = w * k;
  return result;
}

}  // namespace bica
