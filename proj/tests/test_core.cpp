#include <catch2/catch_amalgamated.hpp>

#include "smating/periodic_points.hpp"
#include "smating/rational_angle.hpp"
#include "smating/rational_map.hpp"

using namespace smating;

namespace {

// Independent cubic/quartic root oracle (Durand-Kerner) used to cross-check
// the Newton grid solver.
std::vector<Complex> durand_kerner(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  int n = static_cast<int>(coeffs.size()) - 1;
  for (auto& c : coeffs) c /= coeffs[static_cast<std::size_t>(n)];
  std::vector<Complex> r(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = std::pow(Complex(0.4, 0.9), i);
  for (int it = 0; it < 500; ++it) {
    double moved = 0.0;
    for (int i = 0; i < n; ++i) {
      Complex num(coeffs[0]);
      Complex z = r[static_cast<std::size_t>(i)];
      Complex p(0, 0);
      // evaluate polynomial
      p = coeffs[static_cast<std::size_t>(n)];
      for (int k = n - 1; k >= 0; --k) p = p * z + coeffs[static_cast<std::size_t>(k)];
      Complex den(1, 0);
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z - r[static_cast<std::size_t>(j)];
      Complex d = p / den;
      r[static_cast<std::size_t>(i)] -= d;
      moved = std::max(moved, std::abs(d));
      (void)num;
    }
    if (moved < 1e-14) break;
  }
  return r;
}

}  // namespace

TEST_CASE("orbit of the squaring map") {
  auto f = QuadraticRationalMap::quadratic(Complex(0, 0));
  auto orbit = evaluate_orbit(f, ComplexPoint(2.0, 0.0), 3);
  REQUIRE(orbit.size() == 4);
  CHECK(orbit[0].z == Complex(2, 0));
  CHECK(orbit[1].z == Complex(4, 0));
  CHECK(orbit[2].z == Complex(16, 0));
  CHECK(orbit[3].z == Complex(256, 0));
}

TEST_CASE("basilica superattracting 2-cycle orbit") {
  auto f = QuadraticRationalMap::quadratic(Complex(-1, 0));
  auto orbit = evaluate_orbit(f, ComplexPoint(0.0, 0.0), 4);
  std::vector<double> expect{0.0, -1.0, 0.0, -1.0, 0.0};
  for (int i = 0; i <= 4; ++i) {
    CHECK(orbit[static_cast<std::size_t>(i)].re() == Catch::Approx(expect[static_cast<std::size_t>(i)]).margin(1e-15));
    CHECK(orbit[static_cast<std::size_t>(i)].im() == Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("R_{-1} swaps infinity and zero") {
  auto f = QuadraticRationalMap::basilica(Complex(-1, 0));
  auto orbit = evaluate_orbit(f, ComplexPoint::infinity(), 2);
  REQUIRE(orbit.size() == 3);
  CHECK(orbit[0].infinite);
  CHECK_FALSE(orbit[1].infinite);
  CHECK(std::abs(orbit[1].z) == 0.0);
  CHECK(orbit[2].infinite);
}

TEST_CASE("orbit evaluation is deterministic") {
  auto f = QuadraticRationalMap::quadratic(Complex(-0.12, 0.75));
  auto a = evaluate_orbit(f, ComplexPoint(0.3, -0.2), 64);
  auto b = evaluate_orbit(f, ComplexPoint(0.3, -0.2), 64);
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].infinite == b[i].infinite);
    if (!a[i].infinite) REQUIRE(a[i].z == b[i].z);
  }
}

TEST_CASE("fixed points of the basilica polynomial") {
  // oracle: z^2 - z - 1 = 0 by the quadratic formula; multiplier 2z
  auto f = QuadraticRationalMap::quadratic(Complex(-1, 0));
  auto pts = find_periodic_points(f, 1);
  double s5 = std::sqrt(5.0);
  bool found_beta = false, found_alpha = false;
  for (const auto& p : pts) {
    if (p.location.infinite) continue;
    CHECK(std::abs(f.eval(p.location).z - p.location.z) < 1e-10);
    if (std::abs(p.location.z - Complex((1 + s5) / 2, 0)) < 1e-9) {
      found_beta = true;
      CHECK(std::abs(p.multiplier.z - Complex(1 + s5, 0)) < 1e-9);
      CHECK(p.classification == CycleClass::repelling);
    }
    if (std::abs(p.location.z - Complex((1 - s5) / 2, 0)) < 1e-9) {
      found_alpha = true;
      CHECK(std::abs(p.multiplier.z - Complex(1 - s5, 0)) < 1e-9);
      CHECK(p.classification == CycleClass::repelling);
    }
  }
  CHECK(found_beta);
  CHECK(found_alpha);
}

TEST_CASE("fixed points of the squaring map include infinity") {
  auto f = QuadraticRationalMap::quadratic(Complex(0, 0));
  auto pts = find_periodic_points(f, 1);
  bool zero = false, one = false, inf = false;
  for (const auto& p : pts) {
    if (p.location.infinite) {
      inf = true;
      CHECK(p.classification == CycleClass::superattracting);
      continue;
    }
    if (std::abs(p.location.z) < 1e-9) {
      zero = true;
      CHECK(std::abs(p.multiplier.z) < 1e-10);
      CHECK(p.classification == CycleClass::superattracting);
    }
    if (std::abs(p.location.z - Complex(1, 0)) < 1e-9) {
      one = true;
      CHECK(std::abs(p.multiplier.z - Complex(2, 0)) < 1e-10);
      CHECK(p.classification == CycleClass::repelling);
    }
  }
  CHECK(zero);
  CHECK(one);
  CHECK(inf);
}

TEST_CASE("fixed points of R_{-1} against a cubic oracle") {
  auto f = QuadraticRationalMap::basilica(Complex(-1, 0));
  auto pts = find_periodic_points(f, 1);
  // oracle roots of z^3 + 2z^2 + 1 = 0
  auto roots = durand_kerner({Complex(1, 0), Complex(0, 0), Complex(2, 0), Complex(1, 0)});
  REQUIRE(roots.size() == 3);
  int matched = 0;
  for (const auto& r : roots) {
    for (const auto& p : pts) {
      if (p.location.infinite) continue;
      if (std::abs(p.location.z - r) < 1e-8) {
        ++matched;
        CHECK(std::abs(f.eval(p.location).z - p.location.z) < 1e-12);
        CHECK(std::abs(p.multiplier.z - f.derivative(r)) < 1e-7);
      }
    }
  }
  CHECK(matched == 3);
}

TEST_CASE("orbit multiplier agrees with a finite-difference derivative") {
  auto f = QuadraticRationalMap::quadratic(Complex(-0.4, 0.1));
  Complex z0(0.23, 0.11);
  int p = 3;
  Complex m = orbit_multiplier(f, z0, p);
  double h = 1e-6;
  auto fp = [&](Complex z) {
    ComplexPoint w(z);
    for (int i = 0; i < p; ++i) w = f.eval(w);
    return w.z;
  };
  Complex fd = (fp(z0 + Complex(h, 0)) - fp(z0 - Complex(h, 0))) / Complex(2 * h, 0);
  CHECK(std::abs(m - fd) / std::abs(m) < 1e-6);
}

TEST_CASE("blaschke record stores cubic data and circle symmetry holds") {
  Complex a(2.0 + std::sqrt(5.0), 0.0), b(2.0 - std::sqrt(5.0), 0.0);
  auto F = QuadraticRationalMap::blaschke(a, b, 3.14159265358979323846);
  for (int k = 0; k < 64; ++k) {
    Complex z = unit_angle(static_cast<double>(k) / 64.0);
    Complex w = F.eval(ComplexPoint(z)).z;
    CHECK(std::abs(std::abs(w) - 1.0) < 1e-10);
    // F(1/conj(z)) = 1/conj(F(z))
    Complex zi = 1.0 / std::conj(z * Complex(1.0, 0.3) / std::abs(z * Complex(1.0, 0.3)) * 0.7);
    Complex lhs = F.eval(ComplexPoint(zi)).z;
    Complex rhs = 1.0 / std::conj(F.eval(ComplexPoint(1.0 / std::conj(zi))).z);
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("rational angle arithmetic") {
  RationalAngle t(1, 3);
  CHECK(t.doubled() == RationalAngle(2, 3));
  CHECK(t.doubled().doubled() == t);
  CHECK(t.doubling_period() == 2);
  CHECK(RationalAngle(1, 7).doubling_period() == 3);
  CHECK(RationalAngle(1, 6).doubling_period() == 0);
  CHECK(RationalAngle(1, 6).eventual_doubling_period() == 2);
  CHECK(RationalAngle(0, 1).doubling_period() == 1);
  CHECK(RationalAngle(5, 10) == RationalAngle(1, 2));
  CHECK(RationalAngle(-1, 3) == RationalAngle(2, 3));
  CHECK(RationalAngle(1, 4).in_open_arc(RationalAngle(5, 6), RationalAngle(1, 3)));
  CHECK_FALSE(RationalAngle(1, 2).in_open_arc(RationalAngle(5, 6), RationalAngle(1, 3)));
  auto parsed = parse_rational_angle("3/8");
  REQUIRE(parsed.has_value());
  CHECK(*parsed == RationalAngle(3, 8));
  auto digits = RationalAngle(5, 8).binary_digits();
  CHECK(digits.next() == 1);
  CHECK(digits.next() == 0);
  CHECK(digits.next() == 1);
  CHECK(digits.next() == 0);
}
