// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>

#include "bica/core.hpp"

namespace bica {

/// Counter-based random stream. Every draw is a pure function of
/// (seed, stream_id, counter), so chains and replicates get independent
/// streams by allocating distinct stream ids, with no draw-order coupling
/// between them. A stream is single-owner: never share one across
/// concurrent tasks.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform01();

  double standard_normal();

  double exponential(double rate);

  /// Inverse-Gaussian IG(mu, lambda) via the Michael-Schucany-Haas
  /// transform.
  double inverse_gaussian(double mu, double lambda);

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze, boosted for shape < 1.
  double gamma(double shape);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // UniformRandomBitGenerator interface.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace bica
