// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "bica/core.hpp"

namespace bica {

/// One row per line, comma separated, '.' decimal, no header. Values are
/// written with shortest round-trip formatting.
std::string matrix_to_csv(const Matrix& m);

Matrix matrix_from_csv(std::istream& in);

/// {"rows": r, "cols": c, "data": [...]} with data in row-major order.
nlohmann::json matrix_to_json(const Matrix& m);

/// Validates shape and rejects non-finite entries.
Matrix matrix_from_json(const nlohmann::json& j);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace bica
