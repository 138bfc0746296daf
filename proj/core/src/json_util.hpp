#pragma once

// Internal helpers shared by the JSON readers. Not installed.

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cimdse/error.hpp"
#include "cimdse/units.hpp"

namespace cimdse::detail {

using json = nlohmann::ordered_json;

inline json parse_json(std::string_view text, const std::string& origin) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t limit = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < limit; ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(origin + ":" + std::to_string(line), "malformed JSON");
  }
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key, "missing field");
  return *it;
}

inline std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError(path, "expected an integer");
  return v.get<std::int64_t>();
}

inline std::int64_t require_int(const json& obj, const char* key, const std::string& path) {
  return as_int(require(obj, key, path), path + "." + key);
}

inline std::string require_string(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

// Accepts a JSON number or a string such as "4/3".
inline Rational as_rational(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_float()) {
      // Round-trip through the shortest decimal text so 0.26 stays 26/100.
      return parse_rational(json(v.get<double>()).dump());
    }
  } catch (const InvariantError& e) {
    throw ParseError(path, e.what());
  }
  throw ParseError(path, "expected a number or rational string");
}

inline Energy as_energy_pj(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError(path, "expected a number of picojoules");
  return Energy::from_pj(v.get<double>());
}

inline double energy_json(Energy e) { return e.pj(); }

}  // namespace cimdse::detail
