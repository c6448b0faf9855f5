#pragma once

#include <cmath>
#include <complex>
#include <ostream>

#include "smating/common.hpp"

namespace smating {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline Complex unit_angle(double t) {  // e^{2 pi i t}
  return Complex(std::cos(kTwoPi * t), std::sin(kTwoPi * t));
}

// Point on the Riemann sphere: a finite complex value or the point at
// infinity. Finite coordinates are always finite doubles.
struct ComplexPoint {
  Complex z{0.0, 0.0};
  bool infinite = false;

  ComplexPoint() = default;
  ComplexPoint(double re, double im) : z(re, im) {}
  ComplexPoint(Complex v) : z(v) {}  // NOLINT: implicit by design

  static ComplexPoint infinity() {
    ComplexPoint p;
    p.infinite = true;
    return p;
  }

  double re() const { return z.real(); }
  double im() const { return z.imag(); }
  bool is_finite() const { return !infinite; }

  friend bool operator==(const ComplexPoint& a, const ComplexPoint& b) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    return a.z == b.z;
  }
};

// Chordal metric on the sphere; agrees with 2|a-b| near 0 and is the right
// notion when either point may be infinite.
inline double chordal_distance(const ComplexPoint& a, const ComplexPoint& b) {
  auto lift = [](const ComplexPoint& p, double& x, double& y, double& u) {
    if (p.infinite) {
      x = 0.0; y = 0.0; u = 1.0;
      return;
    }
    double n2 = std::norm(p.z);
    x = 2.0 * p.re() / (1.0 + n2);
    y = 2.0 * p.im() / (1.0 + n2);
    u = (n2 - 1.0) / (n2 + 1.0);
  };
  double ax, ay, au, bx, by, bu;
  lift(a, ax, ay, au);
  lift(b, bx, by, bu);
  return std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by) +
                   (au - bu) * (au - bu));
}

// Euclidean distance; infinite iff exactly one point is infinite.
inline double planar_distance(const ComplexPoint& a, const ComplexPoint& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite || b.infinite) return std::numeric_limits<double>::infinity();
  return std::abs(a.z - b.z);
}

inline std::ostream& operator<<(std::ostream& os, const ComplexPoint& p) {
  if (p.infinite) return os << "inf";
  return os << "(" << p.re() << ", " << p.im() << ")";
}

}  // namespace smating
