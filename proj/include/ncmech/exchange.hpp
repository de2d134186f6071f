#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <vector>

#include "ncmech/polynomial.hpp"

namespace ncmech {

/// Polynomial exchange format: [{"coeff": "p/q" | decimal, "exps": [int, ...]}, ...]
/// in lexicographic order of the exponent tuples.
nlohmann::json to_exchange(const Polynomial& p);

/// Parses the exchange format. Coefficients may be strings or JSON numbers;
/// repeated exponent tuples are summed. Throws DimensionError when an "exps"
/// entry does not have `nvars` components.
Polynomial from_exchange(const nlohmann::json& j, std::size_t nvars, ScalarMode mode);

Scalar scalar_from_json(const nlohmann::json& j, ScalarMode mode);

}  // namespace ncmech
