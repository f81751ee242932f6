// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace bica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// A pivot collapsed below the relative singularity threshold.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cholesky factorization hit a non-positive pivot.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rejection sampling for a well-conditioned matrix ran out of attempts.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A column with zero variance where a correlation is required.
class DegenerateColumnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A monotone objective decreased beyond tolerance.
class DivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bica
