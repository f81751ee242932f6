// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <functional>
#include <string>

#include "bica/core.hpp"
#include "bica/rng.hpp"

namespace bica {

enum class FamilyKind { Sech, StudentT, Laplace, Mixed, Gaussian };

/// Score function psi(s) = d/ds log p(s) and its first two derivatives.
struct ScoreBundle {
  std::function<double(double)> psi;
  std::function<double(double)> psi_prime;
  std::function<double(double)> psi_double_prime;
};

/// A marginal source law with density, score and sampler. Standardization
/// is a deterministic affine map (division by the raw standard deviation)
/// recorded in the descriptor, so densities and scores transform exactly.
/// The mixed family standardizes its components (each to unit variance)
/// rather than the mixture, so the fair mixture is unit variance as well.
///
/// Laplace and mixed scores use the subgradient midpoint 0 at s = 0; they
/// feed diagnostics only, never the Gibbs sweeps.
class SourceFamily {
 public:
  static SourceFamily sech(bool standardized = true);
  static SourceFamily student_t(double nu, bool standardized = true);
  static SourceFamily laplace(bool standardized = true);
  static SourceFamily mixed(bool standardized = true);
  static SourceFamily gaussian(bool standardized = true);

  /// Config tokens: "sech", "t3", "laplace", "mixed", "gaussian", with an
  /// optional ":raw" suffix to disable standardization.
  static SourceFamily parse(const std::string& token);
  std::string token() const;

  FamilyKind kind() const { return kind_; }
  bool standardized() const { return standardized_; }
  double nu() const { return nu_; }

  /// Divisor mapping a raw draw to its standardized value (1 when raw, and
  /// for the mixed family which scales per component).
  double standardization_scale() const { return scale_; }

  /// Normalized log density.
  double log_density(double s) const;

  double psi(double s) const;
  double psi_prime(double s) const;
  double psi_double_prime(double s) const;
  ScoreBundle score() const;

  double sample(RngStream& rng) const;
  Vector sample(Index n, RngStream& rng) const;

 private:
  SourceFamily(FamilyKind kind, bool standardized, double nu);

  double raw_log_density(double s) const;
  double raw_psi(double s) const;
  double raw_psi_prime(double s) const;
  double raw_psi_double_prime(double s) const;
  double raw_sample(RngStream& rng) const;

  FamilyKind kind_;
  bool standardized_;
  double nu_ = 0.0;
  double scale_ = 1.0;
};

/// One exact draw from PG(1, c) by the alternating-series rejection method:
/// PG(1, c) = J*(1, c/2) / 4 with a mixture proposal of a truncated
/// inverse-Gaussian (left of t = 0.64) and a tilted exponential (right),
/// accepted by partial-sum sandwiching. Throws NonFiniteError for NaN/Inf c.
double sample_pg1(double c, RngStream& rng);

/// E[PG(1, c)] = tanh(c/2) / (2c); the series limit 1/4 is used for c < 1e-6.
double pg_mean(double c);

/// log cosh(x), stable for large |x|.
double log_cosh(double x);

/// tanh(u)/u with a series branch for |u| < 1e-4.
double tanh_over_x(double u);

}  // namespace bica
