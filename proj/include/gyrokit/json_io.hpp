#pragma once

// JSON encodings of the library's value types. Requires nlohmann/json
// ("json.hpp") on the include path.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "gyrokit/linear_map.hpp"
#include "gyrokit/matrix_models.hpp"
#include "gyrokit/morphisms.hpp"
#include "gyrokit/report.hpp"

namespace gyrokit {

using Json = nlohmann::json;

/// Shortest decimal form of `x` rounded to 15 significant digits,
/// independent of the C locale. Negative zero prints as 0.
inline std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

/// `x` rounded to 15 significant digits, so that a JSON dump shows at most
/// that many.
inline double round15(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  const std::string s = format_number(x);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

inline Json number_json(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round15(x);
}

inline Json vector_json(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(number_json(x));
  return arr;
}

inline Json to_json(const Hermitian2& h) {
  return Json{{"a", number_json(h.a)},
              {"d", number_json(h.d)},
              {"re_b", number_json(h.re_b)},
              {"im_b", number_json(h.im_b)}};
}

inline Hermitian2 hermitian_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("Hermitian2 must be a JSON object");
  auto field = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw std::invalid_argument(std::string("Hermitian2 field '") + key +
                                  "' missing or not a number");
    }
    return j.at(key).get<double>();
  };
  return {field("a"), field("d"), field("re_b"), field("im_b")};
}

inline Json to_json(const LinearMap& m) {
  Json rows = Json::array();
  for (const auto& row : m.rows()) rows.push_back(vector_json(row));
  return rows;
}

/// Accepts a row-major nested array, or an object {"matrix": [[...], ...]}.
inline LinearMap linear_map_from_json(const Json& j) {
  const Json& rows = j.is_object() && j.contains("matrix") ? j.at("matrix") : j;
  if (!rows.is_array()) throw std::invalid_argument("matrix must be an array of rows");
  std::vector<std::vector<double>> out;
  for (const Json& row : rows) {
    if (!row.is_array()) throw std::invalid_argument("matrix rows must be arrays");
    std::vector<double> r;
    for (const Json& x : row) {
      if (!x.is_number()) throw std::invalid_argument("matrix entries must be numbers");
      r.push_back(x.get<double>());
    }
    out.push_back(std::move(r));
  }
  return LinearMap::from_rows(out);
}

inline Json to_json(const Counterexample& ce) {
  Json inputs = Json::object();
  for (const NamedValue& nv : ce.inputs) {
    inputs[nv.name] = nv.values.size() == 1 ? number_json(nv.values[0])
                                            : vector_json(nv.values);
  }
  return Json{{"inputs", inputs},
              {"residual", number_json(ce.residual)},
              {"threshold", number_json(ce.threshold)}};
}

/// One line of the verification log.
inline Json to_json(const PropertyReport& r) {
  Json j{{"name", r.name},
         {"seed", r.seed},
         {"samples_run", r.samples_run},
         {"passed", r.passed},
         {"max_residual", number_json(r.max_residual)},
         {"worst_ratio", number_json(r.worst_ratio)}};
  j["first_counterexample"] =
      r.first_counterexample ? to_json(*r.first_counterexample) : Json(nullptr);
  return j;
}

inline Json to_json(const MapClassification& c) {
  Json j{{"verdict", c.name()}};
  if (const auto* o = std::get_if<verdict::Orthogonal>(&c.verdict)) {
    j["matrix"] = to_json(o->q);
  } else if (const auto* n = std::get_if<verdict::NotEndomorphism>(&c.verdict)) {
    j["witness"] = Json{{"u", vector_json(n->witness_u.to_vector())},
                        {"v", vector_json(n->witness_v.to_vector())}};
    j["residual"] = number_json(n->residual);
  }
  return j;
}

}  // namespace gyrokit
