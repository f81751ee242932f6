// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <vector>

#include "bica/core.hpp"

namespace bica {

/// Minimum-total-cost perfect assignment on a square cost matrix.
/// Returns perm with perm[row] = assigned column. Ties break to the
/// lexicographically smallest permutation. Exact for n <= 20.
std::vector<int> min_cost_assignment(const Matrix& cost);

/// Signed permutation matching estimated source columns to true ones.
/// permutation[i] is the true column matched to estimated column i;
/// signs[i] is the sign of the matched correlation (0 maps to +1);
/// matched_abs_corr[i] = |corr(S_hat col i, S_true col permutation[i])|.
struct Alignment {
  std::vector<int> permutation;
  std::vector<int> signs;
  Vector matched_abs_corr;
};

/// Solves a linear assignment on cost(i, j) = 1 - |corr(S_hat_i, S_true_j)|.
/// Throws DegenerateColumnError when any column is constant.
Alignment align_sources(const Matrix& s_hat, const Matrix& s_true);

/// Permute and sign-flip estimated source columns onto the true layout.
Matrix apply_alignment_sources(const Matrix& s_hat, const Alignment& a);

/// The matching transformation of the mixing matrix estimate: column i of
/// a_hat moves to column permutation[i] with sign signs[i], so the product
/// S_hat A_hat^T is preserved.
Matrix apply_alignment_mixing(const Matrix& a_hat, const Alignment& a);

/// Amari distance on A = W_true^{-1} W_hat: invariant under signed
/// permutations and row rescaling of W_hat; 0 iff A is a scaled signed
/// permutation.
double amari_distance(const Matrix& w_hat, const Matrix& w_true);

/// Mean over columns of |corr(S_hat_aligned_k, S_true_k)|.
double source_recovery_correlation(const Matrix& s_hat_aligned, const Matrix& s_true);

/// ||X - S_hat_aligned A_hat^T||_F / sqrt(n d).
double reconstruction_rmse(const Matrix& x, const Matrix& s_hat_aligned,
                           const Matrix& a_hat);

/// d_pm: min over signed permutation matrices DP of ||W - D P W0||_F,
/// computed exactly by reduction to assignment with per-row costs
/// min(||w_i - w0_j||^2, ||w_i + w0_j||^2); the per-row sign choice
/// decouples, so the reduction is exact.
double signed_perm_distance(const Matrix& w, const Matrix& w0);

/// Oracle counterpart enumerating all 2^d d! group elements (d <= 8).
double signed_perm_distance_bruteforce(const Matrix& w, const Matrix& w0);

/// Deterministic representative of a signed-permutation class: rows ordered
/// by the column index of their largest |entry|, each row's largest |entry|
/// made positive.
Matrix canonical_signed_perm_representative(const Matrix& w);

/// Pearson correlation of two columns; throws DegenerateColumnError on a
/// constant column.
double pearson_correlation(const Vector& a, const Vector& b);

}  // namespace bica
