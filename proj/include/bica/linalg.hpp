// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include "bica/core.hpp"

namespace bica {

struct DetInverse {
  double det;
  Matrix inverse;
};

/// Determinant and inverse by pivoted LU. Throws SingularMatrixError when a
/// pivot magnitude falls below 1e-12 relative to the largest entry.
DetInverse lu_det_inverse(const Matrix& a);

/// Solve M X = B for symmetric positive-definite M by Cholesky; M^{-1} is
/// never formed. Throws NotPositiveDefiniteError on a non-positive pivot.
Matrix solve_spd(const Matrix& m, const Matrix& b);

/// 2-norm condition number (ratio of extreme singular values).
double condition_number(const Matrix& a);

/// M^{-1/2} for symmetric positive-definite M, by eigendecomposition.
Matrix inverse_sqrt_spd(const Matrix& m);

}  // namespace bica
