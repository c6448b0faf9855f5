#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "smating/common.hpp"

namespace smating {

// Exact angle p/q on R/Z. Arithmetic under doubling is exact; these drive all
// combinatorial descent algorithms. Canonical form: 0 <= num < den, gcd = 1.
struct RationalAngle {
  std::int64_t num = 0;
  std::int64_t den = 1;

  RationalAngle() = default;
  RationalAngle(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw PreconditionError("rational angle with zero denominator");
    if (den < 0) { den = -den; num = -num; }
    num %= den;
    if (num < 0) num += den;
    std::int64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  RationalAngle doubled() const {
    __int128 n = static_cast<__int128>(num) * 2;
    n %= den;
    return RationalAngle(static_cast<std::int64_t>(n), den);
  }

  RationalAngle times_pow2(int k) const {
    RationalAngle a = *this;
    for (int i = 0; i < k; ++i) a = a.doubled();
    return a;
  }

  RationalAngle negated() const { return RationalAngle(den - num, den); }

  RationalAngle plus(const RationalAngle& o) const {
    __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    __int128 d = static_cast<__int128>(den) * o.den;
    n %= d;
    // reduce in 128 bits before narrowing
    auto gcd128 = [](__int128 a, __int128 b) {
      while (b != 0) { __int128 t = a % b; a = b; b = t; }
      return a < 0 ? -a : a;
    };
    __int128 gg = gcd128(n, d);
    if (gg > 1) { n /= gg; d /= gg; }
    if (d > INT64_MAX) throw NumericError("rational angle overflow");
    return RationalAngle(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
  }

  bool is_zero() const { return num == 0; }

  // Exact comparison of angles as elements of [0,1).
  friend bool operator<(const RationalAngle& a, const RationalAngle& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator==(const RationalAngle& a, const RationalAngle& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const RationalAngle& a, const RationalAngle& b) { return !(a == b); }
  friend bool operator<=(const RationalAngle& a, const RationalAngle& b) {
    return a < b || a == b;
  }

  // Strict membership in the open arc (lo, hi) walked counterclockwise;
  // handles wrap-around.
  bool in_open_arc(const RationalAngle& lo, const RationalAngle& hi) const {
    if (lo < hi) return lo < *this && *this < hi;
    return lo < *this || *this < hi;
  }

  // Binary digit stream: digit k of the expansion 0.b0 b1 b2 ...
  // Stream is eventually periodic; exact.
  struct BinaryDigits {
    std::int64_t p, q;
    explicit BinaryDigits(const RationalAngle& a) : p(a.num), q(a.den) {}
    int next() {
      p *= 2;
      int d = static_cast<int>(p / q);
      p %= q;
      return d;
    }
  };
  BinaryDigits binary_digits() const { return BinaryDigits(*this); }

  // Period under the doubling map; 0 when strictly preperiodic. An angle is
  // periodic iff its denominator is odd; period = ord(2) mod den.
  int doubling_period() const {
    if (den % 2 == 0) return 0;
    if (den == 1) return 1;
    int k = 1;
    std::int64_t r = 2 % den;
    while (r != 1 && k < 64) {
      r = (r * 2) % den;
      ++k;
    }
    return r == 1 ? k : 0;
  }

  // Period of the eventual cycle reached under doubling.
  int eventual_doubling_period() const {
    std::int64_t d = den;
    while (d % 2 == 0) d /= 2;
    return RationalAngle(num % d, d).doubling_period();
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// Angle supplied either as an exact rational or a real (rendering only).
struct AngleSpec {
  bool exact = true;
  RationalAngle q;
  double real_value = 0.0;

  AngleSpec() = default;
  AngleSpec(RationalAngle a) : exact(true), q(a), real_value(a.value()) {}  // NOLINT
  static AngleSpec real(double v) {
    AngleSpec a;
    a.exact = false;
    a.real_value = v - std::floor(v);
    return a;
  }
  double value() const { return exact ? q.value() : real_value; }
  std::string str() const {
    return exact ? q.str() : std::to_string(real_value);
  }
};

inline std::optional<RationalAngle> parse_rational_angle(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t pos = 0;
      std::int64_t n = std::stoll(s, &pos);
      if (pos != s.size()) return std::nullopt;
      return RationalAngle(n, 1);
    }
    std::size_t p1 = 0, p2 = 0;
    std::int64_t n = std::stoll(s.substr(0, slash), &p1);
    std::int64_t d = std::stoll(s.substr(slash + 1), &p2);
    if (p1 != slash || p2 != s.size() - slash - 1 || d == 0) return std::nullopt;
    return RationalAngle(n, d);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace smating
