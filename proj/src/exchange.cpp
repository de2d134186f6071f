#include "ncmech/exchange.hpp"

#include <string>

#include "ncmech/error.hpp"

namespace ncmech {

nlohmann::json to_exchange(const Polynomial& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [e, c] : p.terms()) {
    nlohmann::json exps = nlohmann::json::array();
    for (auto k : e) exps.push_back(static_cast<int>(k));
    out.push_back({{"coeff", c.to_string()}, {"exps", std::move(exps)}});
  }
  return out;
}

Scalar scalar_from_json(const nlohmann::json& j, ScalarMode mode) {
  if (j.is_string()) return Scalar::parse(j.get<std::string>(), mode);
  if (j.is_number_integer()) return Scalar::from_int(j.get<long>(), mode);
  // Decimal JSON numbers go through their shortest text form so that 0.1
  // becomes 1/10 in exact mode rather than the nearest double.
  if (j.is_number()) return Scalar::parse(j.dump(), mode);
  throw InvalidArgument("expected a scalar (string or number), got " + std::string(j.type_name()));
}

Polynomial from_exchange(const nlohmann::json& j, std::size_t nvars, ScalarMode mode) {
  if (!j.is_array()) throw InvalidArgument("polynomial must be a list of {coeff, exps} records");
  Polynomial p(nvars, mode);
  for (const auto& rec : j) {
    if (!rec.is_object()) throw InvalidArgument("polynomial term must be an object");
    for (const auto& [key, value] : rec.items()) {
      if (key != "coeff" && key != "exps") throw InvalidArgument("unknown key '" + key + "' in polynomial term");
    }
    if (!rec.contains("coeff") || !rec.contains("exps")) {
      throw InvalidArgument("polynomial term needs both 'coeff' and 'exps'");
    }
    const auto& exps = rec.at("exps");
    if (!exps.is_array()) throw InvalidArgument("'exps' must be a list of integers");
    if (exps.size() != nvars) {
      throw DimensionError("'exps' has " + std::to_string(exps.size()) + " entries, expected " +
                           std::to_string(nvars));
    }
    Polynomial::Exponents e;
    for (const auto& k : exps) {
      if (!k.is_number_integer() || k.get<long>() < 0) throw InvalidArgument("exponents must be non-negative integers");
      const long v = k.get<long>();
      if (v > static_cast<long>(Polynomial::max_degree)) {
        throw DegreeOverflow("exponent " + std::to_string(v) + " exceeds the per-variable cap");
      }
      e.push_back(static_cast<std::uint8_t>(v));
    }
    p.add_term(e, scalar_from_json(rec.at("coeff"), mode));
  }
  return p;
}

}  // namespace ncmech
