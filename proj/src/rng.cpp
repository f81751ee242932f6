// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/rng.hpp"

#include <cmath>
#include <numbers>

namespace bica {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer: full-avalanche 64-bit mix.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  key_ = mix64(mix64(seed + kGolden) ^ mix64(stream_id ^ 0xa3ec647659359acdULL));
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform01() {
  // 53 random bits shifted into (0, 1); never returns an endpoint.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(theta);
  has_cached_normal_ = true;
  return r * std::cos(theta);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) {
    throw InvalidParameterError("exponential: rate must be positive");
  }
  return -std::log(uniform01()) / rate;
}

double RngStream::inverse_gaussian(double mu, double lambda) {
  if (!(mu > 0.0) || !(lambda > 0.0)) {
    throw InvalidParameterError("inverse_gaussian: mu and lambda must be positive");
  }
  const double z = standard_normal();
  const double y = z * z;
  const double x = mu + 0.5 * mu * mu * y / lambda -
                   0.5 * mu / lambda * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
  if (uniform01() <= mu / (mu + x)) {
    return x;
  }
  return mu * mu / x;
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) {
    throw InvalidParameterError("gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double u = uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

}  // namespace bica
