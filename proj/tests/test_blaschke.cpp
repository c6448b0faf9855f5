#include <catch2/catch_amalgamated.hpp>

#include "smating/blaschke.hpp"

using namespace smating;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("critical parameter solve at (1, 0) degenerates to -z") {
  auto p = solve_critical_parameters(1.0, 0.0);
  CHECK(std::abs(p.a - Complex(1, 0)) < 1e-7);  // double root; sqrt halves precision
  CHECK(std::abs(p.b - Complex(1, 0)) < 1e-7);
  // oracle: numerator -z(z-1)^2, denominator (1-z)^2, so F(z) = -z
  auto F = p.map();
  for (int k = 0; k < 16; ++k) {
    Complex z = 0.7 * unit_angle(k / 16.0) + Complex(0.1, 0);
    CHECK(std::abs(F.eval(ComplexPoint(z)).z - (-z)) < 1e-6);
  }
}

TEST_CASE("critical parameter solve at (1, pi)") {
  auto p = solve_critical_parameters(1.0, kPi);
  // oracle: z^2 - 4z - 1 by direct substitution, roots 2 +- sqrt(5)
  double s5 = std::sqrt(5.0);
  CHECK(std::abs(p.a - Complex(2 - s5, 0)) < 1e-12);
  CHECK(std::abs(p.b - Complex(2 + s5, 0)) < 1e-12);
  CHECK(p.invariant_residual() < 1e-12);
}

TEST_CASE("double critical point residuals on sample parameters") {
  auto [r1, r2] = verify_double_critical(solve_critical_parameters(1.05, 2.0));
  CHECK(r1 < 1e-9);
  CHECK(r2 < 1e-9);
  auto [s1, s2] = verify_double_critical(solve_critical_parameters(1.02, 1.0));
  CHECK(s1 < 1e-9);
  CHECK(s2 < 1e-9);
}

TEST_CASE("degenerate corner (1,0) reports the reduced derivative honestly") {
  auto [r1, r2] = verify_double_critical(solve_critical_parameters(1.0, 0.0));
  CHECK(r1 == Catch::Approx(1.0).margin(1e-6));  // F = -z has |F'(1)| = 1
  CHECK(r2 < 1e-6);
}

TEST_CASE("perturbed parameters break the critical condition") {
  auto p = solve_critical_parameters(1.02, 1.0);
  p.a += Complex(0.01, 0);
  auto [r1, r2] = verify_double_critical(p);
  (void)r2;
  CHECK(r1 > 1e-4);
}

TEST_CASE("root relations hold exactly as produced") {
  for (double r : {1.0, 1.02, 1.08})
    for (double th : {0.3, 1.7, 4.4}) {
      auto p = solve_critical_parameters(r, th);
      CHECK(std::abs(p.product() - std::polar(r, th)) < 1e-12);
      CHECK(std::abs(p.sum() - (Complex(3, 0) - std::polar(r, -th))) < 1e-12);
    }
}

TEST_CASE("blaschke circle symmetry and boundary modulus") {
  auto p = solve_critical_parameters(1.05, 0.9);
  auto F = p.map();
  double worst_mod = 0.0, worst_sym = 0.0;
  for (int k = 0; k < 4096; ++k) {
    Complex z = unit_angle((k + 0.3) / 4096.0);
    worst_mod = std::max(worst_mod, std::abs(std::abs(F.eval(ComplexPoint(z)).z) - 1.0));
  }
  for (int k = 0; k < 256; ++k) {
    Complex z = (0.4 + 0.001 * k) * unit_angle(k / 256.0);
    Complex lhs = F.eval(ComplexPoint(1.0 / std::conj(z))).z;
    Complex rhs = 1.0 / std::conj(F.eval(ComplexPoint(z)).z);
    worst_sym = std::max(worst_sym, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  CHECK(worst_mod < 1e-10);
  CHECK(worst_sym < 1e-10);
}

TEST_CASE("zero is a fixed point of multiplier -r") {
  for (double r : {1.0, 1.03, 1.09}) {
    auto p = solve_critical_parameters(r, 2.2);
    auto F = p.map();
    CHECK(std::abs(F.eval(ComplexPoint(Complex(0, 0))).z) < 1e-14);
    CHECK(std::abs(F.derivative(Complex(0, 0)) - Complex(-r, 0)) < 1e-10);
  }
}

TEST_CASE("normal form: multiplier, cancellation, and second-iterate consistency") {
  auto p = solve_critical_parameters(1.01, 0.5);
  auto rep = normal_form_coefficients(p);
  CHECK(std::abs(rep.multiplier_at_0 + Complex(p.r, 0)) < 1e-9);
  CHECK(rep.residual < 1e-10);
  CHECK(std::abs(rep.nu) > 1e-8);

  // independent route: the second iterate of H must carry the coefficient
  // (1+r^2) nu on z^3
  constexpr int N = 8;
  Series<N> F = detail::blaschke_series<N>(p);
  Complex mu = F.c[2] / (p.r * (1.0 + p.r));
  Series<N> psi;
  psi.c[1] = Complex(1, 0);
  psi.c[2] = mu;
  Series<N> H = psi.inverse().compose(F.compose(psi));
  Series<N> H2 = H.compose(H);
  Complex expect = p.r * p.r * (1.0 + p.r * p.r) * rep.nu;
  CHECK(std::abs(H2.c[3] - expect) < 1e-10);
  CHECK(std::abs(H2.c[1] - Complex(p.r * p.r, 0)) < 1e-12);
}

TEST_CASE("normal form regime guard") {
  CHECK_THROWS_AS(normal_form_coefficients(solve_critical_parameters(1.5, 0.5)), RegimeError);
}

TEST_CASE("attracting 2-cycle at r = 1.05") {
  auto p = solve_critical_parameters(1.05, 0.7);
  auto [z1, z2] = find_attracting_two_cycle(p);
  auto F = p.map();
  CHECK(std::abs(z1.multiplier.z) < 1.0);
  CHECK(std::abs(z1.location.z) < 0.5);
  CHECK(std::abs(z2.location.z) < 0.5);
  CHECK(std::abs(F.eval(z1.location).z - z2.location.z) < 1e-9);
  CHECK(std::abs(F.eval(z2.location).z - z1.location.z) < 1e-9);
  // wedge symmetry: the two points have opposite signs to first order
  CHECK(std::abs(z1.location.z + z2.location.z) < 0.3 * std::abs(z1.location.z));
}

TEST_CASE("no attracting cycle is claimed at r = 1") {
  CHECK_THROWS_AS(find_attracting_two_cycle(solve_critical_parameters(1.0, 0.7)), RegimeError);
}

TEST_CASE("rotation number of F_{1,1} is one half") {
  auto p = solve_critical_parameters(1.0, 0.0);
  auto h = CircleMapHandle::blaschke_restriction(p.map(), 4096);
  auto est = rotation_number(h, 4000, h.critical_angle);
  CHECK(std::abs(est.value - 0.5) < 1e-9);
}

TEST_CASE("rotation profile is monotone mod 1 on a coarse grid") {
  // sampled version of the family property used by the bisection solver
  const int G = 16;
  std::vector<double> prof;
  for (int j = 0; j <= G; ++j) prof.push_back(blaschke_rotation(1.0, kTwoPi * j / G, 4000));
  double total = 0.0;
  for (int j = 1; j <= G; ++j) {
    double d = prof[static_cast<std::size_t>(j)] - prof[static_cast<std::size_t>(j - 1)];
    d -= std::floor(d + 0.5);
    CHECK(d < 0.02);  // decreasing family; tolerate measurement noise
    total += d;
  }
  CHECK(std::abs(total + 1.0) < 0.15);  // winds once (negatively)
}

TEST_CASE("theta solve hits the golden rotation number") {
  auto cf = ContinuedFraction::golden(30);
  auto res = solve_theta_for_rotation(cf, 1.0, 1e-5);
  CHECK(res.residual < 1e-5);
  // independent check: plain Birkhoff averaging on a long orbit
  auto p = solve_critical_parameters(1.0, res.theta);
  auto h = CircleMapHandle::blaschke_restriction(p.map(), 4096);
  double x = h.critical_angle, lift = 0.0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    lift += h.displacement(x);
    x = h.angle_map(x);
  }
  CHECK(std::abs(lift / N - kGolden) < 1e-4);

  // local continuity probe
  double nearby = blaschke_rotation(1.0, res.theta + 1e-4, 30000);
  CHECK(std::abs(nearby - kGolden) < 1e-2);
}

TEST_CASE("rational rotation target is rejected") {
  ContinuedFraction half;
  half.a = {2};
  half.p = {1};
  half.q = {2};
  half.rational_terminated = true;
  CHECK_THROWS_AS(solve_theta_for_rotation(half, 1.0), PreconditionError);
}
