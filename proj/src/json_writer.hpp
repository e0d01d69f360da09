#pragma once

// Deterministic JSON text: 17 significant digits for doubles, non-finite
// numbers as null, arrays of scalars on one line.

#include <cmath>
#include <string>

#include "json.hpp"

namespace blaschke {

using ojson = nlohmann::ordered_json;

std::string format_double(double v);
std::string write_json(const ojson& j);

/// Number or null.
inline ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

}  // namespace blaschke
