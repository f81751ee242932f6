// Apache License, Version 2.0, refer to LICENSE.txt
//
// PG(1, c) sampler checks against series oracles, the Laplace transform,
// and the tilted-density identity.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bica/distributions.hpp"
#include "bica/rng.hpp"
#include "support.hpp"

using bica::RngStream;
using bica::sample_pg1;

namespace {

std::vector<double> pg_draws(double c, int n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> x(static_cast<size_t>(n));
  for (auto& v : x) v = sample_pg1(c, rng);
  return x;
}

}  // namespace

TEST_CASE("pg_mean values and monotonicity") {
  CHECK(bica::pg_mean(0.0) == doctest::Approx(0.25));
  CHECK(bica::pg_mean(0.0) == doctest::Approx(testsupport::pg10_mean_series()));
  CHECK(bica::pg_mean(50.0) == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(bica::pg_mean(1.0) > bica::pg_mean(2.0));
  // Series branch continuity near zero.
  CHECK(bica::pg_mean(1e-7) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(bica::pg_mean(2e-6) == doctest::Approx(std::tanh(1e-6) / 4e-6).epsilon(1e-12));
}

TEST_CASE("PG(1,0) mean matches the series oracle within 3 SE") {
  const auto x = pg_draws(0.0, 100000, 101);
  const auto st = testsupport::sample_stats(x);
  CHECK(std::abs(st.mean - testsupport::pg10_mean_series()) < 3.0 * st.se_mean);
}

TEST_CASE("PG(1,0) variance matches the series oracle within 5 SE") {
  const auto x = pg_draws(0.0, 100000, 102);
  const auto st = testsupport::sample_stats(x);
  const double se_var = testsupport::se_of_variance(x);
  CHECK(std::abs(st.variance - testsupport::pg10_var_series()) < 5.0 * se_var);
  CHECK(testsupport::pg10_var_series() == doctest::Approx(1.0 / 24.0).epsilon(1e-4));
}

TEST_CASE("tilted means match tanh(c/2)/(2c) within 3 SE") {
  for (const double c : {1.0, 2.5, 6.0}) {
    const auto x = pg_draws(c, 100000, 103 + static_cast<std::uint64_t>(10.0 * c));
    const auto st = testsupport::sample_stats(x);
    INFO("c = ", c);
    CHECK(std::abs(st.mean - bica::pg_mean(c)) < 3.0 * st.se_mean);
  }
}

TEST_CASE("Laplace transform E[exp(-t tau)] = 1/cosh(sqrt(t/2))") {
  const auto x = pg_draws(0.0, 100000, 104);
  for (const double t : {0.5, 1.0, 2.0}) {
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = std::exp(-t * x[i]);
    const auto st = testsupport::sample_stats(y);
    const double target = 1.0 / std::cosh(std::sqrt(0.5 * t));
    INFO("t = ", t);
    CHECK(std::abs(st.mean - target) < 3.0 * st.se_mean);
  }
}

TEST_CASE("sech mixture identity E[exp(-2 tau s^2)] = 1/cosh(s)") {
  const auto x = pg_draws(0.0, 100000, 105);
  for (const double s : {0.0, 0.7, 1.5}) {
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = std::exp(-2.0 * x[i] * s * s);
    const auto st = testsupport::sample_stats(y);
    const double target = 1.0 / std::cosh(s);
    INFO("s = ", s);
    if (s == 0.0) {
      CHECK(st.mean == 1.0);
    } else {
      CHECK(std::abs(st.mean - target) < 3.0 * st.se_mean);
    }
  }
}

TEST_CASE("tilting consistency: PG(1,c) vs reweighted PG(1,0) draws") {
  // Importance-resample PG(1,0) draws by exp(-c^2 tau / 2) and compare the
  // result to direct PG(1,c) draws with a two-sample KS test.
  const double c = 1.5;
  const int n = 10000;
  const auto base = pg_draws(0.0, n, 106);
  std::vector<double> weights(base.size());
  double wsum = 0.0;
  for (size_t i = 0; i < base.size(); ++i) {
    weights[i] = std::exp(-0.5 * c * c * base[i]);
    wsum += weights[i];
  }
  RngStream rng(107);
  std::vector<double> resampled(800);
  for (auto& v : resampled) {
    double u = rng.uniform01() * wsum;
    size_t idx = 0;
    while (idx + 1 < base.size() && u > weights[idx]) {
      u -= weights[idx];
      ++idx;
    }
    v = base[idx];
  }
  const auto direct = pg_draws(c, n, 108);
  CHECK(testsupport::ks_pvalue_two_sample(resampled, direct) > 0.01);
}

TEST_CASE("devroye draws match the truncated Jacobi series construction") {
  // J* = (2/pi^2) sum e_k / (k - 1/2)^2 gives PG(1,0) = J*/4.
  RngStream rng(109);
  const int n = 20000;
  const int terms = 2000;
  std::vector<double> series(static_cast<size_t>(n));
  for (auto& v : series) {
    double s = 0.0;
    for (int k = 1; k <= terms; ++k) {
      const double d = k - 0.5;
      s += rng.exponential(1.0) / (d * d);
    }
    v = 0.5 * s / (std::numbers::pi * std::numbers::pi);
  }
  const auto direct = pg_draws(0.0, n, 110);
  CHECK(testsupport::ks_pvalue_two_sample(series, direct) > 0.01);
}

TEST_CASE("sample_pg1 rejects non-finite c and returns positives") {
  RngStream rng(111);
  CHECK_THROWS_AS(sample_pg1(std::numeric_limits<double>::quiet_NaN(), rng),
                  bica::NonFiniteError);
  CHECK_THROWS_AS(sample_pg1(std::numeric_limits<double>::infinity(), rng),
                  bica::NonFiniteError);
  for (int i = 0; i < 2000; ++i) {
    CHECK(sample_pg1(30.0, rng) > 0.0);
  }
}
