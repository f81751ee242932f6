// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bica/core.hpp"
#include "bica/distributions.hpp"

namespace bica {

enum class Protocol { Hierarchical, Benchmark };

struct DatasetTruth {
  Matrix S;  // n x d sources
  Matrix A;  // d x d mixing
  std::vector<SourceFamily> families;  // per column; empty for hierarchical
};

struct Dataset {
  Matrix X;  // n x d observations
  std::optional<DatasetTruth> truth;
  Protocol protocol = Protocol::Benchmark;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  double sigma2 = 0.0;          // hierarchical only
  bool hard_first = false;      // hierarchical only
  std::string family_token;     // benchmark: family; hierarchical: "pg-sech"
};

/// PG-augmented hierarchical generator: V entries N(0, sigma2^2),
/// tau ~ PG(1, 0) (first column scaled by 100 when hard_first_component),
/// s | tau ~ N(0, 1/(4 tau)), X = S V^T + N(0, sigma^2) noise.
Dataset generate_hierarchical(Index n, Index d, double sigma, double sigma2,
                              bool hard_first_component, std::uint64_t seed);

/// Benchmark generator: standardized i.i.d. sources from the family
/// (mixed splits columns half t3, half Laplace, odd d giving the extra
/// column to t3), mixing A with N(0,1) entries redrawn until its 2-norm
/// condition number is <= 10, X = S A^T + N(0, sigma^2) noise.
Dataset generate_benchmark(const SourceFamily& family, Index n, Index d,
                           double sigma, std::uint64_t seed);

/// Column families realizing the benchmark family on d columns.
std::vector<SourceFamily> benchmark_column_families(const SourceFamily& family, Index d);

/// JSON-lines: metadata record, then X, then S and A when truth is present.
void write_dataset(const Dataset& ds, std::ostream& out);
Dataset read_dataset(std::istream& in);

}  // namespace bica
