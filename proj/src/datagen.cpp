// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/datagen.hpp"

#include <istream>
#include <ostream>

#include "bica/linalg.hpp"
#include "bica/matrix_io.hpp"
#include "bica/rng.hpp"

namespace bica {

Dataset generate_hierarchical(Index n, Index d, double sigma, double sigma2,
                              bool hard_first_component, std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw InvalidParameterError("generate_hierarchical: n and d must be >= 1");
  }
  if (!(sigma > 0.0) || !(sigma2 > 0.0)) {
    throw InvalidParameterError("generate_hierarchical: sigma and sigma2 must be positive");
  }
  RngStream rng(seed, 0);

  Matrix v(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      v(i, j) = sigma2 * rng.standard_normal();
    }
  }

  Matrix tau(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      tau(i, j) = sample_pg1(0.0, rng);
    }
  }
  if (hard_first_component) {
    tau.col(0) *= 100.0;
  }

  Matrix s(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      s(i, j) = rng.standard_normal() / (2.0 * std::sqrt(tau(i, j)));
    }
  }

  Matrix x = s * v.transpose();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      x(i, j) += sigma * rng.standard_normal();
    }
  }

  Dataset ds;
  ds.X = std::move(x);
  ds.truth = DatasetTruth{std::move(s), std::move(v), {}};
  ds.protocol = Protocol::Hierarchical;
  ds.seed = seed;
  ds.sigma = sigma;
  ds.sigma2 = sigma2;
  ds.hard_first = hard_first_component;
  ds.family_token = "pg-sech";
  return ds;
}

std::vector<SourceFamily> benchmark_column_families(const SourceFamily& family, Index d) {
  std::vector<SourceFamily> out;
  out.reserve(static_cast<size_t>(d));
  if (family.kind() == FamilyKind::Mixed) {
    const Index n_t3 = (d + 1) / 2;
    for (Index k = 0; k < d; ++k) {
      out.push_back(k < n_t3 ? SourceFamily::student_t(3.0, family.standardized())
                             : SourceFamily::laplace(family.standardized()));
    }
  } else {
    for (Index k = 0; k < d; ++k) {
      out.push_back(family);
    }
  }
  return out;
}

Dataset generate_benchmark(const SourceFamily& family, Index n, Index d,
                           double sigma, std::uint64_t seed) {
  if (d < 2 || n < d) {
    throw InvalidParameterError("generate_benchmark: need n >= d >= 2");
  }
  if (!(sigma > 0.0)) {
    throw InvalidParameterError("generate_benchmark: sigma must be positive");
  }
  RngStream rng(seed, 0);

  const auto families = benchmark_column_families(family, d);
  Matrix s(n, d);
  for (Index k = 0; k < d; ++k) {
    s.col(k) = families[static_cast<size_t>(k)].sample(n, rng);
  }

  Matrix a(d, d);
  int attempts = 0;
  for (;;) {
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) {
        a(i, j) = rng.standard_normal();
      }
    }
    if (condition_number(a) <= 10.0) {
      break;
    }
    if (++attempts >= 1000) {
      throw ConditioningError("generate_benchmark: no well-conditioned A in 1000 attempts");
    }
  }

  Matrix x = s * a.transpose();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      x(i, j) += sigma * rng.standard_normal();
    }
  }

  Dataset ds;
  ds.X = std::move(x);
  ds.truth = DatasetTruth{std::move(s), std::move(a), families};
  ds.protocol = Protocol::Benchmark;
  ds.seed = seed;
  ds.sigma = sigma;
  ds.family_token = family.token();
  return ds;
}

void write_dataset(const Dataset& ds, std::ostream& out) {
  nlohmann::json meta{
      {"protocol", ds.protocol == Protocol::Hierarchical ? "hierarchical" : "benchmark"},
      {"n", ds.X.rows()},
      {"d", ds.X.cols()},
      {"sigma", ds.sigma},
      {"family", ds.family_token},
      {"seed", ds.seed},
      {"has_truth", ds.truth.has_value()},
  };
  if (ds.protocol == Protocol::Hierarchical) {
    meta["sigma2"] = ds.sigma2;
    meta["hard_first_component"] = ds.hard_first;
  } else {
    meta["standardized"] = true;
  }
  out << meta.dump() << '\n';
  out << matrix_to_json(ds.X).dump() << '\n';
  if (ds.truth) {
    out << matrix_to_json(ds.truth->S).dump() << '\n';
    out << matrix_to_json(ds.truth->A).dump() << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw InvalidParameterError("read_dataset: empty file");
  }
  const auto meta = nlohmann::json::parse(line);
  Dataset ds;
  ds.protocol = meta.at("protocol").get<std::string>() == "hierarchical"
                    ? Protocol::Hierarchical
                    : Protocol::Benchmark;
  ds.sigma = meta.at("sigma").get<double>();
  ds.seed = meta.at("seed").get<std::uint64_t>();
  ds.family_token = meta.at("family").get<std::string>();
  if (meta.contains("sigma2")) ds.sigma2 = meta["sigma2"].get<double>();
  if (meta.contains("hard_first_component")) ds.hard_first = meta["hard_first_component"].get<bool>();

  if (!std::getline(in, line)) {
    throw InvalidParameterError("read_dataset: missing X record");
  }
  ds.X = matrix_from_json(nlohmann::json::parse(line));

  if (meta.at("has_truth").get<bool>()) {
    DatasetTruth truth;
    if (!std::getline(in, line)) {
      throw InvalidParameterError("read_dataset: missing S record");
    }
    truth.S = matrix_from_json(nlohmann::json::parse(line));
    if (!std::getline(in, line)) {
      throw InvalidParameterError("read_dataset: missing A record");
    }
    truth.A = matrix_from_json(nlohmann::json::parse(line));
    if (ds.protocol == Protocol::Benchmark && ds.family_token != "pg-sech") {
      truth.families = benchmark_column_families(SourceFamily::parse(ds.family_token),
                                                 ds.X.cols());
    }
    ds.truth = std::move(truth);
  }
  return ds;
}

}  // namespace bica
