// Apache License, Version 2.0, refer to LICENSE.txt
//
// Shared helpers for the test suites: independent oracles (quadrature,
// series sums, KS statistics, finite differences) kept deliberately apart
// from the library implementation paths they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "bica/core.hpp"

namespace testsupport {

// Integral of f over the real line via the substitution s = sinh(u) and
// composite Simpson on u. Handles polynomial tails (Student-t) since the
// transformed integrand decays exponentially.
inline double integrate_real_line(const std::function<double(double)>& f,
                                  int points = 80001, double u_max = 15.0) {
  const double h = 2.0 * u_max / (points - 1);
  auto g = [&](double u) {
    const double s = std::sinh(u);
    return f(s) * std::cosh(u);
  };
  double total = g(-u_max) + g(u_max);
  for (int i = 1; i < points - 1; ++i) {
    const double u = -u_max + i * h;
    total += (i % 2 == 1 ? 4.0 : 2.0) * g(u);
  }
  return total * h / 3.0;
}

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;
  double kurtosis = 0.0;  // E[(x - mu)^4] / var^2
  double se_mean = 0.0;
  std::size_t n = 0;
};

inline SampleStats sample_stats(const std::vector<double>& x) {
  SampleStats s;
  s.n = x.size();
  double sum = 0.0;
  for (double v : x) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double c = v - s.mean;
    m2 += c * c;
    m4 += c * c * c * c;
  }
  m2 /= static_cast<double>(s.n);
  m4 /= static_cast<double>(s.n);
  s.variance = m2;
  s.kurtosis = m4 / (m2 * m2);
  s.se_mean = std::sqrt(m2 / static_cast<double>(s.n));
  return s;
}

// Standard error of the sample variance: sd of (x - mu)^2 over sqrt(n).
inline double se_of_variance(const std::vector<double>& x) {
  const auto st = sample_stats(x);
  double m = 0.0;
  for (double v : x) {
    const double sq = (v - st.mean) * (v - st.mean);
    m += (sq - st.variance) * (sq - st.variance);
  }
  m /= static_cast<double>(x.size());
  return std::sqrt(m / static_cast<double>(x.size()));
}

// Asymptotic Kolmogorov distribution tail Q(lambda).
inline double kolmogorov_q(double lambda) {
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 1.0 : -1.0) * term;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n),
                  std::abs(f - static_cast<double>(i + 1) / n)});
  }
  return d;
}

inline double ks_pvalue_one_sample(const std::vector<double>& sample,
                                   const std::function<double(double)>& cdf) {
  const double d = ks_statistic(sample, cdf);
  const double sn = std::sqrt(static_cast<double>(sample.size()));
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

inline double ks_pvalue_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  const double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                    static_cast<double>(a.size() + b.size());
  const double sn = std::sqrt(ne);
  return kolmogorov_q((sn + 0.12 + 0.11 / sn) * d);
}

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h = 1e-4) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Truncated series for E[PG(1,0)] = (1/(2 pi^2)) sum (k - 1/2)^{-2} and the
// matching fourth-power sum for the variance.
inline double pg10_mean_series(int terms = 200000) {
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double d = k - 0.5;
    s += 1.0 / (d * d);
  }
  return s / (2.0 * std::numbers::pi * std::numbers::pi);
}

inline double pg10_var_series(int terms = 200000) {
  double s = 0.0;
  for (int k = 1; k <= terms; ++k) {
    const double d = k - 0.5;
    s += 1.0 / (d * d * d * d);
  }
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return s / (4.0 * pi2 * pi2);
}

}  // namespace testsupport
