#include "cimdse/units.hpp"

#include <charconv>
#include <stdexcept>

#include "cimdse/error.hpp"

namespace cimdse {

namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvariantError("not a rational number: '" + whole + "'");
  }
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (auto slash = text.find('/'); slash != std::string::npos) {
    auto num = parse_int(std::string_view(text).substr(0, slash), text);
    auto den = parse_int(std::string_view(text).substr(slash + 1), text);
    if (den == 0) throw InvariantError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
    return Rational(parse_int(digits, text), den);
  }
  return Rational(parse_int(text, text));
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace cimdse
