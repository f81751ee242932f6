// Apache License, Version 2.0, refer to LICENSE.txt

#include "bica/matrix_io.hpp"

#include <charconv>
#include <istream>
#include <sstream>
#include <vector>

namespace bica {

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

Matrix matrix_from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw InvalidParameterError("matrix_from_csv: bad cell '" + cell + "'");
      }
      if (!std::isfinite(v)) {
        throw NonFiniteError("matrix_from_csv: non-finite entry");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidParameterError("matrix_from_csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InvalidParameterError("matrix_from_csv: empty input");
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(static_cast<size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      data.push_back(m(i, j));
    }
  }
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (rows < 1 || cols < 1 || static_cast<Index>(data.size()) != rows * cols) {
    throw InvalidParameterError("matrix_from_json: inconsistent dimensions");
  }
  Matrix m(rows, cols);
  Index k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j2 = 0; j2 < cols; ++j2) {
      const double v = data.at(static_cast<size_t>(k++)).get<double>();
      if (!std::isfinite(v)) {
        throw NonFiniteError("matrix_from_json: non-finite entry");
      }
      m(i, j2) = v;
    }
  }
  return m;
}

}  // namespace bica
