// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <vector>

#include "bica/core.hpp"

namespace bica {

struct EmState {
  Matrix W;
  int iterations = 0;
  double loglik = 0.0;
  bool converged = false;
  std::vector<double> objective_history;
};

/// Per-sample objective of the sech model:
/// log |det W| - sum_i mean_n log cosh(w_i^T x^(n)).
double sech_objective(const Matrix& w, const Matrix& x);

/// E-step: Z_i = mean_n [ tanh(u)/(2u) x x^T ] with u = w_i^T x^(n).
/// Each Z_i is symmetric positive semi-definite by construction; the ratio
/// tanh(u)/u takes its series branch for |u| < 1e-4.
std::vector<Matrix> em_estep(const Matrix& w, const Matrix& x);

/// M-step maximizing log det W - sum_i w_i^T Z_i w_i. Rows update in index
/// order against the partially updated W (Gauss-Seidel): the direction is
/// w~ = (W Z_i)^{-1} e_i and the scale maximizing the surrogate puts
/// w_i^T Z_i w_i = 1/2, i.e. w_i = w~ / sqrt(2 w~^T Z_i w~). Z_i is
/// regularized by +1e-10 I when its solve fails.
Matrix em_mstep(const std::vector<Matrix>& z, const Matrix& w_current);

/// Alternate em_estep / em_mstep until |delta objective| < tol or max_iter.
/// Throws DivergedError if the objective decreases by more than 1e-8.
EmState run_em(const Matrix& x, const Matrix& w0, int max_iter, double tol);

/// One alternation of the auxiliary-function route: per-sample slack
/// r = |w_i^T x| (the surrogate is tight there), envelope weight
/// phi'(r)/(2r), then the same row-wise W update. Produces the same iterate
/// as em_estep + em_mstep.
Matrix ono_update(const Matrix& w, const Matrix& x);

/// Quadratic envelope of phi(s) = log cosh(s) at slack r:
/// (phi'(r)/(2r)) s^2 + phi(r) - r phi'(r)/2; equality at r = |s|.
double ono_envelope(double s, double r);

/// Natural-gradient ascent step W + eta (I - mean_n[tanh(a) a^T]) W with
/// a = W x^(n).
Matrix mackay_step(const Matrix& w, const Matrix& x_batch, double eta);

EmState run_mackay(const Matrix& x, const Matrix& w0, double eta, int max_iter,
                   double tol);

struct FastIcaResult {
  Matrix W;  // unmixing in original coordinates: S_hat = (X - mean) W^T
  Vector mean;
  int iterations = 0;
  bool converged = false;
};

/// Symmetric fixed-point iteration with tanh contrast on whitened data,
/// decorrelated by (W W^T)^{-1/2} each sweep. When the sweep fails to
/// converge (e.g. all-Gaussian sources) the best iterate is returned with
/// converged = false.
FastIcaResult fastica(const Matrix& x, int max_iter, double tol, std::uint64_t seed);

}  // namespace bica
