#pragma once

// JSON form of NormSpec.
//
//   {"type": "weighted_p", "weights": [...], "p": 3}
//   {"type": "weighted_p", "dim": 4, "p": 3}                      unit weights
//   {"type": "composed", "s": 1, "terms": [{"weights": [...], "p": 2}, ...]}
//   {"type": "dual_composed", "t": 2, "terms": [{"weights": [...], "q": 3}, ...]}
//
// "t" may be the string "inf". Dual-composed terms accept "p" for "q".
// Support disjointness is always recomputed.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "conenorm/norm_spec.hpp"

namespace conenorm {

/// Malformed norm description.
class SpecParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double json_exponent(const nlohmann::json& j, const char* key, bool allow_inf) {
  if (!j.contains(key)) throw SpecParseError(std::string("norm spec: missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (allow_inf && v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  throw SpecParseError(std::string("norm spec: \"") + key + "\" must be a number");
}

inline Vector json_weights(const nlohmann::json& j) {
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (!w.is_array()) throw SpecParseError("norm spec: \"weights\" must be an array");
    Vector out;
    for (const auto& v : w) {
      if (!v.is_number()) throw SpecParseError("norm spec: weights must be numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  if (j.contains("dim")) {
    const auto& d = j.at("dim");
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0) {
      throw SpecParseError("norm spec: \"dim\" must be a positive integer");
    }
    return ones(d.get<std::size_t>());
  }
  throw SpecParseError("norm spec: need \"weights\" or \"dim\"");
}

inline std::vector<WeightedPTerm> json_terms(const nlohmann::json& j, bool dual) {
  if (!j.contains("terms") || !j.at("terms").is_array()) {
    throw SpecParseError("norm spec: \"terms\" must be an array");
  }
  std::vector<WeightedPTerm> terms;
  for (const auto& t : j.at("terms")) {
    if (!t.is_object()) throw SpecParseError("norm spec: each term must be an object");
    const char* key = dual && t.contains("q") ? "q" : "p";
    terms.push_back({json_weights(t), json_exponent(t, key, false)});
  }
  return terms;
}

inline nlohmann::json exponent_to_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

}  // namespace detail

inline NormSpec norm_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw SpecParseError("norm spec: missing \"type\"");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "weighted_p") {
    return WeightedPNorm(detail::json_weights(j), detail::json_exponent(j, "p", false));
  }
  if (type == "composed") {
    return ComposedNorm(detail::json_terms(j, false), detail::json_exponent(j, "s", false));
  }
  if (type == "dual_composed") {
    return DualComposedNorm(detail::json_terms(j, true), detail::json_exponent(j, "t", true));
  }
  throw SpecParseError("norm spec: unknown type \"" + type + "\"");
}

inline NormSpec parse_norm_spec(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecParseError(std::string("norm spec: ") + e.what());
  }
  return norm_spec_from_json(j);
}

inline nlohmann::json to_json(const NormSpec& spec) {
  auto terms_json = [](const std::vector<WeightedPTerm>& terms, const char* key) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& t : terms) arr.push_back({{"weights", t.weights}, {key, t.p}});
    return arr;
  };
  if (const auto* w = std::get_if<WeightedPNorm>(&spec)) {
    return {{"type", "weighted_p"}, {"weights", w->term().weights}, {"p", w->term().p}};
  }
  if (const auto* c = std::get_if<ComposedNorm>(&spec)) {
    return {{"type", "composed"}, {"s", c->s()}, {"terms", terms_json(c->terms(), "p")}};
  }
  const auto& d = std::get<DualComposedNorm>(spec);
  return {{"type", "dual_composed"},
          {"t", detail::exponent_to_json(d.t())},
          {"terms", terms_json(d.terms(), "q")}};
}

}  // namespace conenorm
