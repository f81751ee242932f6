// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/distributions.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace bica {

namespace {

constexpr double kPi = std::numbers::pi;

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double student_t_log_norm(double nu) {
  return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
         0.5 * std::log(nu * kPi);
}

}  // namespace

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double tanh_over_x(double u) {
  if (std::abs(u) < 1e-4) {
    const double u2 = u * u;
    return 1.0 - u2 / 3.0 + 2.0 * u2 * u2 / 15.0;
  }
  return std::tanh(u) / u;
}

SourceFamily::SourceFamily(FamilyKind kind, bool standardized, double nu)
    : kind_(kind), standardized_(standardized), nu_(nu) {
  if (kind_ == FamilyKind::StudentT) {
    if (!(nu_ > 0.0)) {
      throw InvalidParameterError("student_t: nu must be positive");
    }
    if (standardized_ && nu_ <= 2.0) {
      throw InvalidParameterError("student_t: nu <= 2 has infinite variance, cannot standardize");
    }
  }
  if (standardized_) {
    switch (kind_) {
      case FamilyKind::Sech:
        scale_ = kPi / 2.0;
        break;
      case FamilyKind::StudentT:
        scale_ = std::sqrt(nu_ / (nu_ - 2.0));
        break;
      case FamilyKind::Laplace:
        scale_ = std::sqrt(2.0);
        break;
      case FamilyKind::Mixed:    // components are standardized individually
      case FamilyKind::Gaussian:
        scale_ = 1.0;
        break;
    }
  }
}

SourceFamily SourceFamily::sech(bool standardized) {
  return SourceFamily(FamilyKind::Sech, standardized, 0.0);
}

SourceFamily SourceFamily::student_t(double nu, bool standardized) {
  return SourceFamily(FamilyKind::StudentT, standardized, nu);
}

SourceFamily SourceFamily::laplace(bool standardized) {
  return SourceFamily(FamilyKind::Laplace, standardized, 0.0);
}

SourceFamily SourceFamily::mixed(bool standardized) {
  return SourceFamily(FamilyKind::Mixed, standardized, 0.0);
}

SourceFamily SourceFamily::gaussian(bool standardized) {
  return SourceFamily(FamilyKind::Gaussian, standardized, 0.0);
}

SourceFamily SourceFamily::parse(const std::string& token) {
  std::string base = token;
  bool standardized = true;
  if (const auto pos = base.rfind(":raw"); pos != std::string::npos && pos == base.size() - 4) {
    standardized = false;
    base = base.substr(0, pos);
  }
  if (base == "sech") return sech(standardized);
  if (base == "laplace") return laplace(standardized);
  if (base == "mixed") return mixed(standardized);
  if (base == "gaussian") return gaussian(standardized);
  if (base.size() > 1 && base[0] == 't') {
    const double nu = std::stod(base.substr(1));
    return student_t(nu, standardized);
  }
  throw InvalidParameterError("unknown source family token '" + token + "'");
}

std::string SourceFamily::token() const {
  std::string base;
  switch (kind_) {
    case FamilyKind::Sech: base = "sech"; break;
    case FamilyKind::StudentT: {
      base = "t";
      if (nu_ == std::floor(nu_)) {
        base += std::to_string(static_cast<long long>(nu_));
      } else {
        base += std::to_string(nu_);
      }
      break;
    }
    case FamilyKind::Laplace: base = "laplace"; break;
    case FamilyKind::Mixed: base = "mixed"; break;
    case FamilyKind::Gaussian: base = "gaussian"; break;
  }
  if (!standardized_) base += ":raw";
  return base;
}

double SourceFamily::raw_log_density(double s) const {
  switch (kind_) {
    case FamilyKind::Sech:
      return -std::log(kPi) - log_cosh(s);
    case FamilyKind::StudentT:
      return student_t_log_norm(nu_) - 0.5 * (nu_ + 1.0) * std::log1p(s * s / nu_);
    case FamilyKind::Laplace:
      return -std::numbers::ln2 - std::abs(s);
    case FamilyKind::Gaussian:
      return -0.5 * std::log(2.0 * kPi) - 0.5 * s * s;
    case FamilyKind::Mixed: {
      const SourceFamily t3 = student_t(3.0, standardized_);
      const SourceFamily lap = laplace(standardized_);
      return logsumexp2(t3.log_density(s), lap.log_density(s)) - std::numbers::ln2;
    }
  }
  return 0.0;
}

double SourceFamily::raw_psi(double s) const {
  switch (kind_) {
    case FamilyKind::Sech:
      return -std::tanh(s);
    case FamilyKind::StudentT:
      return -(nu_ + 1.0) * s / (nu_ + s * s);
    case FamilyKind::Laplace:
      return s == 0.0 ? 0.0 : (s > 0.0 ? -1.0 : 1.0);
    case FamilyKind::Gaussian:
      return -s;
    case FamilyKind::Mixed:
      return 0.0;  // handled in psi()
  }
  return 0.0;
}

double SourceFamily::raw_psi_prime(double s) const {
  switch (kind_) {
    case FamilyKind::Sech: {
      const double c = std::cosh(s);
      return -1.0 / (c * c);
    }
    case FamilyKind::StudentT: {
      const double q = nu_ + s * s;
      return -(nu_ + 1.0) * (nu_ - s * s) / (q * q);
    }
    case FamilyKind::Laplace:
      return 0.0;
    case FamilyKind::Gaussian:
      return -1.0;
    case FamilyKind::Mixed:
      return 0.0;
  }
  return 0.0;
}

double SourceFamily::raw_psi_double_prime(double s) const {
  switch (kind_) {
    case FamilyKind::Sech: {
      const double c = std::cosh(s);
      return 2.0 * std::tanh(s) / (c * c);
    }
    case FamilyKind::StudentT: {
      const double q = nu_ + s * s;
      return 2.0 * s * (nu_ + 1.0) * (3.0 * nu_ - s * s) / (q * q * q);
    }
    case FamilyKind::Laplace:
      return 0.0;
    case FamilyKind::Gaussian:
      return 0.0;
    case FamilyKind::Mixed:
      return 0.0;
  }
  return 0.0;
}

double SourceFamily::log_density(double s) const {
  if (kind_ == FamilyKind::Mixed) {
    return raw_log_density(s);
  }
  return std::log(scale_) + raw_log_density(scale_ * s);
}

double SourceFamily::psi(double s) const {
  if (kind_ == FamilyKind::Mixed) {
    // Mixture p = (p1 + p2)/2: psi = (w1 psi1 + w2 psi2) with w_i = p_i / (p1 + p2).
    const SourceFamily t3 = student_t(3.0, standardized_);
    const SourceFamily lap = laplace(standardized_);
    const double lp1 = t3.log_density(s);
    const double lp2 = lap.log_density(s);
    const double lse = logsumexp2(lp1, lp2);
    const double w1 = std::exp(lp1 - lse);
    const double w2 = std::exp(lp2 - lse);
    return w1 * t3.psi(s) + w2 * lap.psi(s);
  }
  return scale_ * raw_psi(scale_ * s);
}

double SourceFamily::psi_prime(double s) const {
  if (kind_ == FamilyKind::Mixed) {
    // p''/p = sum_i w_i (psi_i' + psi_i^2); psi' = p''/p - psi^2.
    const SourceFamily t3 = student_t(3.0, standardized_);
    const SourceFamily lap = laplace(standardized_);
    const double lp1 = t3.log_density(s);
    const double lp2 = lap.log_density(s);
    const double lse = logsumexp2(lp1, lp2);
    const double w1 = std::exp(lp1 - lse);
    const double w2 = std::exp(lp2 - lse);
    const double p1 = t3.psi(s);
    const double p2 = lap.psi(s);
    const double m2 = w1 * (t3.psi_prime(s) + p1 * p1) + w2 * (lap.psi_prime(s) + p2 * p2);
    const double m1 = w1 * p1 + w2 * p2;
    return m2 - m1 * m1;
  }
  return scale_ * scale_ * raw_psi_prime(scale_ * s);
}

double SourceFamily::psi_double_prime(double s) const {
  if (kind_ == FamilyKind::Mixed) {
    // p'''/p = sum_i w_i (psi_i'' + 3 psi_i psi_i' + psi_i^3);
    // psi'' = p'''/p - 3 (p''/p) psi + 2 psi^3.
    const SourceFamily t3 = student_t(3.0, standardized_);
    const SourceFamily lap = laplace(standardized_);
    const double lp1 = t3.log_density(s);
    const double lp2 = lap.log_density(s);
    const double lse = logsumexp2(lp1, lp2);
    const double w1 = std::exp(lp1 - lse);
    const double w2 = std::exp(lp2 - lse);
    const double p1 = t3.psi(s);
    const double p2 = lap.psi(s);
    const double d1 = t3.psi_prime(s);
    const double d2 = lap.psi_prime(s);
    const double m1 = w1 * p1 + w2 * p2;
    const double m2 = w1 * (d1 + p1 * p1) + w2 * (d2 + p2 * p2);
    const double m3 = w1 * (t3.psi_double_prime(s) + 3.0 * p1 * d1 + p1 * p1 * p1) +
                      w2 * (lap.psi_double_prime(s) + 3.0 * p2 * d2 + p2 * p2 * p2);
    return m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1;
  }
  return scale_ * scale_ * scale_ * raw_psi_double_prime(scale_ * s);
}

ScoreBundle SourceFamily::score() const {
  const SourceFamily self = *this;
  return ScoreBundle{
      [self](double s) { return self.psi(s); },
      [self](double s) { return self.psi_prime(s); },
      [self](double s) { return self.psi_double_prime(s); },
  };
}

double SourceFamily::raw_sample(RngStream& rng) const {
  switch (kind_) {
    case FamilyKind::Sech:
      // Inverse CDF of F(s) = (2/pi) arctan(e^s).
      return std::log(std::tan(0.5 * kPi * rng.uniform01()));
    case FamilyKind::StudentT: {
      const double z = rng.standard_normal();
      const double chi2 = 2.0 * rng.gamma(0.5 * nu_);
      return z / std::sqrt(chi2 / nu_);
    }
    case FamilyKind::Laplace: {
      const double u = rng.uniform01();
      return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    }
    case FamilyKind::Gaussian:
      return rng.standard_normal();
    case FamilyKind::Mixed: {
      const bool heads = rng.uniform01() < 0.5;
      const SourceFamily comp = heads ? student_t(3.0, standardized_) : laplace(standardized_);
      return comp.sample(rng);
    }
  }
  return 0.0;
}

double SourceFamily::sample(RngStream& rng) const {
  if (kind_ == FamilyKind::Mixed) {
    return raw_sample(rng);
  }
  return raw_sample(rng) / scale_;
}

Vector SourceFamily::sample(Index n, RngStream& rng) const {
  if (n < 1) {
    throw InvalidParameterError("sample: n must be >= 1");
  }
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    out(i) = sample(rng);
  }
  return out;
}

double pg_mean(double c) {
  const double a = std::abs(c);
  if (a < 1e-6) {
    const double u = 0.5 * a;
    return 0.25 * (1.0 - u * u / 3.0 + 2.0 * u * u * u * u / 15.0);
  }
  return std::tanh(0.5 * a) / (2.0 * a);
}

// ---------------------------------------------------------------------------
// PG(1, c) sampler, Devroye-style alternating series rejection.
// ---------------------------------------------------------------------------

namespace {

constexpr double kPgTrunc = 0.64;

double log_norm_cdf(double x) {
  if (x > -36.0) {
    return std::log(0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0));
  }
  // Mills-ratio asymptotic for the far left tail.
  const double x2 = x * x;
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * kPi) +
         std::log1p(-1.0 / x2 + 3.0 / (x2 * x2));
}

// Series coefficient a_n(x) of the tilted Jacobi density, in its
// small-x and large-x forms (the crossover is the truncation point).
double jacobi_coef(int n, double x) {
  const double k = (n + 0.5) * kPi;
  if (x > kPgTrunc) {
    return k * std::exp(-0.5 * k * k * x);
  }
  if (x > 0.0) {
    const double expnt = -1.5 * (std::log(0.5 * kPi) + std::log(x)) + std::log(k) -
                         2.0 * (n + 0.5) * (n + 0.5) / x;
    return std::exp(expnt);
  }
  return 0.0;
}

// Probability of proposing from the truncated-exponential (right) branch.
double right_branch_mass(double z) {
  const double t = kPgTrunc;
  const double fz = 0.125 * kPi * kPi + 0.5 * z * z;
  const double b = std::sqrt(1.0 / t) * (t * z - 1.0);
  const double a = -std::sqrt(1.0 / t) * (t * z + 1.0);
  const double x0 = std::log(fz) + fz * t;
  const double xb = x0 - z + log_norm_cdf(b);
  const double xa = x0 + z + log_norm_cdf(a);
  const double qdivp = 4.0 / kPi * (std::exp(xb) + std::exp(xa));
  return 1.0 / (1.0 + qdivp);
}

// Inverse-Gaussian IG(1/z, 1) conditioned on (0, t].
double truncated_inverse_gaussian(double z, RngStream& rng) {
  const double t = kPgTrunc;
  if (z < 1.0 / t) {
    // Mean exceeds the truncation point: sample 1/x from a truncated
    // chi-square proposal, accept with the tilt.
    for (;;) {
      double e1;
      double e2;
      do {
        e1 = rng.exponential(1.0);
        e2 = rng.exponential(1.0);
      } while (e1 * e1 > 2.0 * e2 / t);
      const double x = t / ((1.0 + t * e1) * (1.0 + t * e1));
      if (rng.uniform01() <= std::exp(-0.5 * z * z * x)) {
        return x;
      }
    }
  }
  const double mu = 1.0 / z;
  for (;;) {
    const double zn = rng.standard_normal();
    const double y = zn * zn;
    const double mu_y = mu * y;
    double x = mu + 0.5 * mu * mu_y - 0.5 * mu * std::sqrt(4.0 * mu_y + mu_y * mu_y);
    if (rng.uniform01() > mu / (mu + x)) {
      x = mu * mu / x;
    }
    if (x <= t) {
      return x;
    }
  }
}

}  // namespace

double sample_pg1(double c, RngStream& rng) {
  if (!std::isfinite(c)) {
    throw NonFiniteError("sample_pg1: c must be finite");
  }
  const double z = 0.5 * std::abs(c);
  const double fz = 0.125 * kPi * kPi + 0.5 * z * z;
  const double p_right = right_branch_mass(z);
  for (;;) {
    double x;
    if (rng.uniform01() < p_right) {
      x = kPgTrunc + rng.exponential(1.0) / fz;
    } else {
      x = truncated_inverse_gaussian(z, rng);
    }
    double partial = jacobi_coef(0, x);
    const double y = rng.uniform01() * partial;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        partial -= jacobi_coef(n, x);
        if (y <= partial) {
          return 0.25 * x;
        }
      } else {
        partial += jacobi_coef(n, x);
        if (y > partial) {
          break;
        }
      }
    }
  }
}

}  // namespace bica
