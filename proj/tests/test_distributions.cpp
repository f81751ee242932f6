// Apache License, Version 2.0, refer to LICENSE.txt

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "bica/distributions.hpp"
#include "support.hpp"

using bica::RngStream;
using bica::SourceFamily;

namespace {

const std::vector<SourceFamily> all_families() {
  return {SourceFamily::sech(),          SourceFamily::student_t(3.0),
          SourceFamily::laplace(),       SourceFamily::mixed(),
          SourceFamily::gaussian(),      SourceFamily::sech(false),
          SourceFamily::student_t(3.0, false), SourceFamily::laplace(false),
          SourceFamily::mixed(false),    SourceFamily::gaussian(false)};
}

bool smooth_at(const SourceFamily& f, double s) {
  const auto k = f.kind();
  if (k == bica::FamilyKind::Laplace || k == bica::FamilyKind::Mixed) {
    return std::abs(s) > 1e-9;
  }
  return true;
}

}  // namespace

TEST_CASE("log densities integrate to one") {
  for (const auto& f : all_families()) {
    const double z = testsupport::integrate_real_line(
        [&](double s) { return std::exp(f.log_density(s)); });
    INFO("family ", f.token());
    CHECK(z == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("standardized families have unit variance (quadrature and samples)") {
  for (const auto& f : {SourceFamily::sech(), SourceFamily::student_t(3.0),
                        SourceFamily::laplace(), SourceFamily::mixed(),
                        SourceFamily::gaussian()}) {
    const double var = testsupport::integrate_real_line(
        [&](double s) { return s * s * std::exp(f.log_density(s)); });
    INFO("family ", f.token());
    CHECK(var == doctest::Approx(1.0).epsilon(1e-4));

    RngStream rng(31);
    std::vector<double> x(1000000);
    for (auto& v : x) v = f.sample(rng);
    const auto st = testsupport::sample_stats(x);
    CHECK(st.variance == doctest::Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("sech pre-standardization facts") {
  const auto raw = SourceFamily::sech(false);
  // Normalizer: integral of sech is pi.
  CHECK(raw.log_density(0.0) == doctest::Approx(-std::log(std::numbers::pi)));
  // Median draw: u = 1/2 maps to log tan(pi/4) = 0.
  CHECK(std::log(std::tan(std::numbers::pi / 4.0)) == doctest::Approx(0.0));
  // Raw variance pi^2 / 4 by quadrature and by simulation.
  const double var_quad = testsupport::integrate_real_line(
      [&](double s) { return s * s * std::exp(raw.log_density(s)); });
  const double expected = std::numbers::pi * std::numbers::pi / 4.0;
  CHECK(var_quad == doctest::Approx(expected).epsilon(1e-6));
  RngStream rng(32);
  std::vector<double> x(1000000);
  for (auto& v : x) v = raw.sample(rng);
  CHECK(testsupport::sample_stats(x).variance == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("laplace facts: mode density, kurtosis, score") {
  const auto raw = SourceFamily::laplace(false);
  CHECK(raw.log_density(0.0) == doctest::Approx(std::log(0.5)));
  CHECK(raw.psi(1.0) == doctest::Approx(-1.0));
  CHECK(raw.psi(0.0) == 0.0);

  RngStream rng(33);
  std::vector<double> x(1000000);
  const auto std_lap = SourceFamily::laplace();
  for (auto& v : x) v = std_lap.sample(rng);
  CHECK(testsupport::sample_stats(x).kurtosis == doctest::Approx(6.0).epsilon(0.05));
}

TEST_CASE("student t3 density and score values") {
  const auto raw = SourceFamily::student_t(3.0, false);
  CHECK(raw.log_density(0.0) ==
        doctest::Approx(std::log(2.0 / (std::numbers::pi * std::sqrt(3.0)))));
  CHECK(raw.psi(1.7) == doctest::Approx(-4.0 * 1.7 / (3.0 + 1.7 * 1.7)));
  const double fd = testsupport::central_diff([&](double s) { return raw.log_density(s); }, 1.7);
  CHECK(std::abs(raw.psi(1.7) - fd) < 1e-6);
  CHECK_THROWS_AS(SourceFamily::student_t(2.0), bica::InvalidParameterError);
  CHECK_NOTHROW(SourceFamily::student_t(2.0, false));
}

TEST_CASE("sech score values at zero") {
  const auto raw = SourceFamily::sech(false);
  CHECK(raw.psi(0.0) == 0.0);
  CHECK(raw.psi_prime(0.0) == doctest::Approx(-1.0));
}

TEST_CASE("score bundles pass finite-difference consistency on a grid") {
  for (const auto& f : all_families()) {
    const auto bundle = f.score();
    for (int i = 0; i <= 100; ++i) {
      const double s = -5.0 + 0.1 * i;
      if (!smooth_at(f, s)) continue;
      INFO("family ", f.token(), " at s=", s);
      const double fd_psi =
          testsupport::central_diff([&](double t) { return f.log_density(t); }, s);
      CHECK(std::abs(bundle.psi(s) - fd_psi) < 1e-6);
      const double fd_psi_p =
          testsupport::central_diff([&](double t) { return f.psi(t); }, s);
      CHECK(std::abs(bundle.psi_prime(s) - fd_psi_p) < 1e-6);
      const double fd_psi_pp =
          testsupport::central_diff([&](double t) { return f.psi_prime(t); }, s);
      CHECK(std::abs(bundle.psi_double_prime(s) - fd_psi_pp) < 1e-6);
    }
  }
}

TEST_CASE("score identities E[psi]=0 and E[psi S]=-1 per family") {
  for (const auto& f : all_families()) {
    RngStream rng(57);
    const int n = 100000;
    std::vector<double> psis(n);
    std::vector<double> psi_s(n);
    for (int i = 0; i < n; ++i) {
      const double s = f.sample(rng);
      psis[static_cast<size_t>(i)] = f.psi(s);
      psi_s[static_cast<size_t>(i)] = f.psi(s) * s;
    }
    const auto st1 = testsupport::sample_stats(psis);
    const auto st2 = testsupport::sample_stats(psi_s);
    INFO("family ", f.token());
    CHECK(std::abs(st1.mean) < 3.0 * st1.se_mean);
    CHECK(std::abs(st2.mean + 1.0) < 3.0 * st2.se_mean);
  }
}

TEST_CASE("family tokens round trip") {
  for (const auto& f : all_families()) {
    const auto parsed = SourceFamily::parse(f.token());
    CHECK(parsed.kind() == f.kind());
    CHECK(parsed.standardized() == f.standardized());
  }
  CHECK(SourceFamily::parse("t3").nu() == 3.0);
  CHECK_THROWS_AS(SourceFamily::parse("cauchy"), bica::InvalidParameterError);
}

TEST_CASE("sample rejects nonpositive counts") {
  RngStream rng(1);
  CHECK_THROWS_AS(SourceFamily::sech().sample(0, rng), bica::InvalidParameterError);
}
