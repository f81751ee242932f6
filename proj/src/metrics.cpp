// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "bica/linalg.hpp"

namespace bica {

std::vector<int> min_cost_assignment(const Matrix& cost) {
  const Index n = cost.rows();
  if (cost.cols() != n || n < 1) {
    throw InvalidParameterError("min_cost_assignment: cost matrix must be square");
  }
  if (n > 20) {
    throw InvalidParameterError("min_cost_assignment: dimension too large for subset DP");
  }
  if (!cost.allFinite()) {
    throw NonFiniteError("min_cost_assignment: cost entries must be finite");
  }

  // best[mask] = min cost of assigning the last popcount(mask) rows to the
  // column set mask, rows taken in index order from the back.
  const std::uint32_t full = (1u << n) - 1u;
  std::vector<double> best(full + 1u, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const int row = static_cast<int>(n) - std::popcount(mask);
    for (std::uint32_t m = mask; m != 0; m &= m - 1u) {
      const int j = std::countr_zero(m);
      const double cand = cost(row, j) + best[mask & ~(1u << j)];
      if (cand < best[mask]) {
        best[mask] = cand;
      }
    }
  }

  // Front-to-back greedy reconstruction picks the smallest feasible column
  // per row, which yields the lexicographically smallest optimal permutation.
  std::vector<int> perm(static_cast<size_t>(n), -1);
  std::uint32_t remaining = full;
  for (int row = 0; row < n; ++row) {
    for (std::uint32_t m = remaining; m != 0; m &= m - 1u) {
      const int j = std::countr_zero(m);
      if (cost(row, j) + best[remaining & ~(1u << j)] == best[remaining]) {
        perm[static_cast<size_t>(row)] = j;
        remaining &= ~(1u << j);
        break;
      }
    }
  }
  return perm;
}

double pearson_correlation(const Vector& a, const Vector& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidParameterError("pearson_correlation: size mismatch");
  }
  const Vector ac = a.array() - a.mean();
  const Vector bc = b.array() - b.mean();
  const double na = ac.norm();
  const double nb = bc.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw DegenerateColumnError("pearson_correlation: constant column");
  }
  return ac.dot(bc) / (na * nb);
}

Alignment align_sources(const Matrix& s_hat, const Matrix& s_true) {
  if (s_hat.rows() != s_true.rows() || s_hat.cols() != s_true.cols()) {
    throw InvalidParameterError("align_sources: dimension mismatch");
  }
  const Index d = s_hat.cols();
  Matrix corr(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      corr(i, j) = pearson_correlation(s_hat.col(i), s_true.col(j));
    }
  }
  const Matrix cost = Matrix::Ones(d, d) - corr.cwiseAbs();
  Alignment out;
  out.permutation = min_cost_assignment(cost);
  out.signs.resize(static_cast<size_t>(d));
  out.matched_abs_corr.resize(d);
  for (Index i = 0; i < d; ++i) {
    const double r = corr(i, out.permutation[static_cast<size_t>(i)]);
    out.signs[static_cast<size_t>(i)] = r < 0.0 ? -1 : 1;
    out.matched_abs_corr(i) = std::abs(r);
  }
  return out;
}

Matrix apply_alignment_sources(const Matrix& s_hat, const Alignment& a) {
  Matrix out(s_hat.rows(), s_hat.cols());
  for (Index i = 0; i < s_hat.cols(); ++i) {
    out.col(a.permutation[static_cast<size_t>(i)]) =
        a.signs[static_cast<size_t>(i)] * s_hat.col(i);
  }
  return out;
}

Matrix apply_alignment_mixing(const Matrix& a_hat, const Alignment& a) {
  Matrix out(a_hat.rows(), a_hat.cols());
  for (Index i = 0; i < a_hat.cols(); ++i) {
    out.col(a.permutation[static_cast<size_t>(i)]) =
        a.signs[static_cast<size_t>(i)] * a_hat.col(i);
  }
  return out;
}

double amari_distance(const Matrix& w_hat, const Matrix& w_true) {
  if (w_hat.rows() != w_hat.cols() || w_hat.rows() != w_true.rows() ||
      w_true.rows() != w_true.cols()) {
    throw InvalidParameterError("amari_distance: matrices must be square, same size");
  }
  const Index d = w_hat.rows();
  if (d < 2) {
    throw InvalidParameterError("amari_distance: dimension must be >= 2");
  }
  const Matrix a = (lu_det_inverse(w_true).inverse * w_hat).cwiseAbs();
  double total = 0.0;
  for (Index i = 0; i < d; ++i) {
    total += a.row(i).sum() / a.row(i).maxCoeff() - 1.0;
  }
  for (Index j = 0; j < d; ++j) {
    total += a.col(j).sum() / a.col(j).maxCoeff() - 1.0;
  }
  return total / (2.0 * static_cast<double>(d - 1));
}

double source_recovery_correlation(const Matrix& s_hat_aligned, const Matrix& s_true) {
  if (s_hat_aligned.rows() != s_true.rows() || s_hat_aligned.cols() != s_true.cols()) {
    throw InvalidParameterError("source_recovery_correlation: dimension mismatch");
  }
  double total = 0.0;
  for (Index k = 0; k < s_true.cols(); ++k) {
    total += std::abs(pearson_correlation(s_hat_aligned.col(k), s_true.col(k)));
  }
  return total / static_cast<double>(s_true.cols());
}

double reconstruction_rmse(const Matrix& x, const Matrix& s_hat_aligned,
                           const Matrix& a_hat) {
  if (s_hat_aligned.rows() != x.rows() || a_hat.rows() != x.cols() ||
      a_hat.cols() != s_hat_aligned.cols()) {
    throw InvalidParameterError("reconstruction_rmse: dimension mismatch");
  }
  const double nd = static_cast<double>(x.rows()) * static_cast<double>(x.cols());
  return (x - s_hat_aligned * a_hat.transpose()).norm() / std::sqrt(nd);
}

double signed_perm_distance(const Matrix& w, const Matrix& w0) {
  if (w.rows() != w.cols() || w.rows() != w0.rows() || w0.rows() != w0.cols()) {
    throw InvalidParameterError("signed_perm_distance: matrices must be square, same size");
  }
  const Index d = w.rows();
  Matrix cost(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      const double minus = (w.row(i) - w0.row(j)).squaredNorm();
      const double plus = (w.row(i) + w0.row(j)).squaredNorm();
      cost(i, j) = std::min(minus, plus);
    }
  }
  const auto perm = min_cost_assignment(cost);
  double total = 0.0;
  for (Index i = 0; i < d; ++i) {
    total += cost(i, perm[static_cast<size_t>(i)]);
  }
  return std::sqrt(std::max(total, 0.0));
}

double signed_perm_distance_bruteforce(const Matrix& w, const Matrix& w0) {
  const Index d = w.rows();
  if (d > 8) {
    throw InvalidParameterError("signed_perm_distance_bruteforce: d too large");
  }
  std::vector<int> perm(static_cast<size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    for (std::uint32_t signs = 0; signs < (1u << d); ++signs) {
      // Rows of D P W0: row i is +/- row perm[i] of W0.
      double total = 0.0;
      for (Index i = 0; i < d; ++i) {
        const double s = (signs >> i) & 1u ? -1.0 : 1.0;
        total += (w.row(i) - s * w0.row(perm[static_cast<size_t>(i)])).squaredNorm();
      }
      best = std::min(best, total);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(std::max(best, 0.0));
}

Matrix canonical_signed_perm_representative(const Matrix& w) {
  const Index d = w.rows();
  if (w.cols() != d) {
    throw InvalidParameterError("canonical_signed_perm_representative: matrix must be square");
  }
  std::vector<Index> order(static_cast<size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::vector<Index> argmax(static_cast<size_t>(d));
  for (Index i = 0; i < d; ++i) {
    Index jmax = 0;
    w.row(i).cwiseAbs().maxCoeff(&jmax);
    argmax[static_cast<size_t>(i)] = jmax;
  }
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return argmax[static_cast<size_t>(a)] < argmax[static_cast<size_t>(b)];
  });
  Matrix out(d, d);
  for (Index i = 0; i < d; ++i) {
    const Index src = order[static_cast<size_t>(i)];
    const double pivot = w(src, argmax[static_cast<size_t>(src)]);
    out.row(i) = (pivot < 0.0 ? -1.0 : 1.0) * w.row(src);
  }
  return out;
}

}  // namespace bica
