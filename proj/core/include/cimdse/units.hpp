#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>

#include <boost/rational.hpp>

namespace cimdse {

using Rational = boost::rational<std::int64_t>;

__extension__ using Int128 = __int128;

inline double to_double(const Rational& r) {
  return boost::rational_cast<double>(r);
}

// Parses "4/3", "1.25" or "2" into an exact rational.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

/// Energy held as an integer number of femtojoules so that sums are exact.
/// 1 pJ = 1000 fJ; every constant in the bundled data is a multiple of 1 fJ.
class Energy {
 public:
  constexpr Energy() = default;
  static constexpr Energy from_fj(Int128 fj) { return Energy(fj); }
  static Energy from_pj(double pj) {
    return Energy(static_cast<Int128>(std::llround(pj * 1000.0)));
  }

  constexpr Int128 fj() const { return fj_; }
  double pj() const { return static_cast<double>(fj_) / 1000.0; }

  constexpr Energy& operator+=(Energy o) {
    fj_ += o.fj_;
    return *this;
  }
  friend constexpr Energy operator+(Energy a, Energy b) { return a += b; }
  friend constexpr Energy operator*(Energy a, std::uint64_t n) {
    return Energy(a.fj_ * static_cast<Int128>(n));
  }
  friend constexpr Energy operator*(std::uint64_t n, Energy a) { return a * n; }
  friend constexpr bool operator==(Energy a, Energy b) = default;
  friend constexpr auto operator<=>(Energy a, Energy b) = default;

  friend std::ostream& operator<<(std::ostream& os, Energy e) {
    return os << e.pj() << " pJ";
  }

 private:
  constexpr explicit Energy(Int128 fj) : fj_(fj) {}
  Int128 fj_ = 0;
};

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  return (a + b - 1) / b;
}

}  // namespace cimdse
