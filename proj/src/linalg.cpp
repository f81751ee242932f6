// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace bica {

DetInverse lu_det_inverse(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw InvalidParameterError("lu_det_inverse: matrix must be square, dimension >= 1");
  }
  Eigen::PartialPivLU<Matrix> lu(a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(scale > 0.0) || min_pivot < 1e-12 * scale) {
    throw SingularMatrixError("lu_det_inverse: matrix is numerically singular");
  }
  return DetInverse{lu.determinant(), lu.inverse()};
}

Matrix solve_spd(const Matrix& m, const Matrix& b) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw InvalidParameterError("solve_spd: matrix must be square");
  }
  if (m.rows() != b.rows()) {
    throw InvalidParameterError("solve_spd: dimension mismatch");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidParameterError("solve_spd: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError("solve_spd: matrix is not positive definite");
  }
  return llt.solve(b);
}

double condition_number(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return sv(0) / smin;
}

Matrix inverse_sqrt_spd(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw NotPositiveDefiniteError("inverse_sqrt_spd: matrix is not positive definite");
  }
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace bica
