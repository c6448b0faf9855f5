#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "smating/complex_sphere.hpp"

namespace smating {

enum class MapFamily { quadratic_polynomial, basilica_rational, blaschke_cubic, generic };

namespace poly {

using Coeffs = std::array<Complex, 4>;  // c[k] multiplies z^k, degree <= 3

inline Complex eval(const Coeffs& c, Complex z) {
  return ((c[3] * z + c[2]) * z + c[1]) * z + c[0];
}

inline Coeffs derivative(const Coeffs& c) {
  return {c[1], 2.0 * c[2], 3.0 * c[3], Complex(0.0)};
}

inline Coeffs reversed(const Coeffs& c) {  // z^3 * p(1/z)
  return {c[3], c[2], c[1], c[0]};
}

inline int degree(const Coeffs& c) {
  for (int k = 3; k >= 0; --k)
    if (std::abs(c[k]) != 0.0) return k;
  return -1;
}

}  // namespace poly

// Degree-2 (or, for the Blaschke model, degree-3) rational map stored as
// numerator/denominator coefficients with a family label. The cubic slot is
// only populated for blaschke_cubic.
struct QuadraticRationalMap {
  poly::Coeffs num{Complex(0), Complex(0), Complex(1), Complex(0)};
  poly::Coeffs den{Complex(1), Complex(0), Complex(0), Complex(0)};
  MapFamily tag = MapFamily::generic;

  // Family parameters, kept for reporting. Only the slots relevant to the
  // tag are meaningful.
  Complex param_c{0, 0};     // quadratic_polynomial: f_c
  Complex param_a{0, 0};     // basilica_rational: R_a
  Complex blaschke_a{0, 0};  // blaschke_cubic zeros a, b and prefactor
  Complex blaschke_b{0, 0};
  Complex blaschke_prefactor{1, 0};

  static QuadraticRationalMap quadratic(Complex c) {
    QuadraticRationalMap f;
    f.num = {c, Complex(0), Complex(1), Complex(0)};
    f.den = {Complex(1), Complex(0), Complex(0), Complex(0)};
    f.tag = MapFamily::quadratic_polynomial;
    f.param_c = c;
    return f;
  }

  static QuadraticRationalMap basilica(Complex a) {
    if (std::abs(a) == 0.0) throw PreconditionError("basilica family requires a != 0");
    QuadraticRationalMap f;
    f.num = {a, Complex(0), Complex(0), Complex(0)};
    f.den = {Complex(0), Complex(2), Complex(1), Complex(0)};
    f.tag = MapFamily::basilica_rational;
    f.param_a = a;
    return f;
  }

  // F(z) = -e^{-i theta} z (z-a)(z-b) / ((1 - conj(a) z)(1 - conj(b) z))
  static QuadraticRationalMap blaschke(Complex a, Complex b, double theta) {
    QuadraticRationalMap f;
    Complex u = -std::exp(Complex(0, -theta));
    f.num = {Complex(0), u * a * b, -u * (a + b), u};
    Complex ca = std::conj(a), cb = std::conj(b);
    f.den = {Complex(1), -(ca + cb), ca * cb, Complex(0)};
    f.tag = MapFamily::blaschke_cubic;
    f.blaschke_a = a;
    f.blaschke_b = b;
    f.blaschke_prefactor = u;
    return f;
  }

  bool nondegenerate() const {
    int dn = poly::degree(num), dd = poly::degree(den);
    if (dn < 0 || dd < 0) return false;
    return true;  // families are constructed nondegenerate; grid solvers re-check residuals
  }

  // Evaluation on the sphere. Large |z| is routed through w = 1/z so that the
  // superattracting point at infinity never overflows.
  ComplexPoint eval(const ComplexPoint& p) const {
    const double big = tol().infinity_switch;
    if (p.infinite) return eval_reversed(Complex(0, 0));
    if (std::abs(p.z) > big) return eval_reversed(1.0 / p.z);
    Complex n = poly::eval(num, p.z);
    Complex d = poly::eval(den, p.z);
    if (std::abs(n) < 1e-28 && std::abs(d) < 1e-28) {
      // removable singularity (common factor); resolve by l'Hopital
      poly::Coeffs nc = num, dc = den;
      for (int k = 0; k < 3; ++k) {
        nc = poly::derivative(nc);
        dc = poly::derivative(dc);
        n = poly::eval(nc, p.z);
        d = poly::eval(dc, p.z);
        if (std::abs(n) > 1e-28 || std::abs(d) > 1e-28) break;
      }
    }
    if (std::abs(d) == 0.0) {
      if (std::abs(n) == 0.0) throw NumericError("0/0 while evaluating rational map");
      return ComplexPoint::infinity();
    }
    Complex w = n / d;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw NumericError("numeric overflow without infinity resolution");
    return ComplexPoint(w);
  }

  // Reversed coefficient arrays with the common power of w stripped, so that
  // f(1/w) = N(w)/D(w) is well defined at w = 0 for any degree <= 3.
  void reversed_reduced(poly::Coeffs& rn, poly::Coeffs& rd) const {
    rn = poly::reversed(num);
    rd = poly::reversed(den);
    for (int shift = 0; shift < 3; ++shift) {
      if (std::abs(rn[0]) != 0.0 || std::abs(rd[0]) != 0.0) break;
      rn = {rn[1], rn[2], rn[3], Complex(0)};
      rd = {rd[1], rd[2], rd[3], Complex(0)};
    }
  }

  // f(1/w) evaluated via reversed coefficients; w = 0 gives f(infinity).
  ComplexPoint eval_reversed(Complex w) const {
    poly::Coeffs rn, rd;
    reversed_reduced(rn, rd);
    Complex n = poly::eval(rn, w);
    Complex d = poly::eval(rd, w);
    if (std::abs(d) == 0.0) {
      if (std::abs(n) == 0.0) throw NumericError("0/0 at infinity");
      return ComplexPoint::infinity();
    }
    Complex v = n / d;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      return ComplexPoint::infinity();
    return ComplexPoint(v);
  }

  // Derivative at a finite point (rational quotient rule).
  Complex derivative(Complex z) const {
    Complex n = poly::eval(num, z);
    Complex d = poly::eval(den, z);
    Complex np = poly::eval(poly::derivative(num), z);
    Complex dp = poly::eval(poly::derivative(den), z);
    return (np * d - n * dp) / (d * d);
  }

  // Second derivative, same route.
  Complex second_derivative(Complex z) const {
    Complex n = poly::eval(num, z);
    Complex d = poly::eval(den, z);
    Complex np = poly::eval(poly::derivative(num), z);
    Complex dp = poly::eval(poly::derivative(den), z);
    poly::Coeffs n2c = poly::derivative(poly::derivative(num));
    poly::Coeffs d2c = poly::derivative(poly::derivative(den));
    Complex npp = poly::eval(n2c, z);
    Complex dpp = poly::eval(d2c, z);
    Complex first = (np * d - n * dp);
    return (npp * d - n * dpp) / (d * d) - 2.0 * dp * first / (d * d * d);
  }

  // Multiplier of a fixed point, valid also at infinity (computed in the
  // w = 1/z chart there).
  Complex fixed_point_multiplier(const ComplexPoint& p) const {
    if (!p.infinite) return derivative(p.z);
    // g(w) = 1 / f(1/w); g'(0) with reversed coefficients.
    poly::Coeffs rn, rd;
    reversed_reduced(rn, rd);
    Complex n = poly::eval(rd, Complex(0)), d = poly::eval(rn, Complex(0));
    Complex np = poly::eval(poly::derivative(rd), Complex(0));
    Complex dp = poly::eval(poly::derivative(rn), Complex(0));
    if (std::abs(d) == 0.0) return Complex(0, 0);  // superattracting at infinity
    return (np * d - n * dp) / (d * d);
  }
};

// [z0, f(z0), ..., f^n(z0)], sphere conventions throughout.
inline std::vector<ComplexPoint> evaluate_orbit(const QuadraticRationalMap& f,
                                                const ComplexPoint& z0, int n) {
  if (n < 0) throw PreconditionError("orbit length must be nonnegative");
  if (!f.nondegenerate()) throw PreconditionError("degenerate map");
  std::vector<ComplexPoint> orbit;
  orbit.reserve(static_cast<std::size_t>(n) + 1);
  orbit.push_back(z0);
  for (int i = 0; i < n; ++i) orbit.push_back(f.eval(orbit.back()));
  return orbit;
}

}  // namespace smating
