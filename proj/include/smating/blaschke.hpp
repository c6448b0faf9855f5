#pragma once

#include <optional>

#include "smating/circle_map.hpp"
#include "smating/continued_fraction.hpp"
#include "smating/periodic_points.hpp"
#include "smating/series.hpp"

namespace smating {

// Parameters of the cubic Blaschke family with fixed point 0 of multiplier
// -r and a double critical point at 1: a, b are the roots of
//   z^2 + (r e^{-i theta} - 3) z + r e^{i theta} = 0.
struct BlaschkeParameters {
  double r = 1.0;
  double theta = 0.0;
  Complex a;
  Complex b;

  Complex product() const { return a * b; }            // = r e^{i theta}
  Complex sum() const { return a + b; }                // = 3 - r e^{-i theta}
  QuadraticRationalMap map() const { return QuadraticRationalMap::blaschke(a, b, theta); }

  double invariant_residual() const {
    Complex kappa = std::polar(r, theta);
    double r1 = std::abs(product() - kappa);
    double r2 = std::abs(sum() - (Complex(3, 0) - std::conj(kappa)));
    return std::max(r1, r2);
  }
};

inline BlaschkeParameters solve_critical_parameters(double r, double theta) {
  if (!(r > 0.0)) throw PreconditionError("blaschke family requires r > 0");
  Complex kappa = std::polar(r, theta);
  Complex B = std::conj(kappa) - Complex(3, 0);  // z^2 + B z + kappa
  Complex disc = std::sqrt(B * B - 4.0 * kappa);
  Complex r1 = (-B + disc) / 2.0;
  Complex r2 = (-B - disc) / 2.0;
  // stabilized second root via the product when the first dominates
  if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
  if (std::abs(r1) > 0.0) r2 = kappa / r1;
  BlaschkeParameters p;
  p.r = r;
  p.theta = theta;
  p.a = (std::abs(r1) <= std::abs(r2)) ? r1 : r2;  // |a| <= |b|
  p.b = (std::abs(r1) <= std::abs(r2)) ? r2 : r1;
  return p;
}

// |F'(1)| and |F''(1)|. When numerator and denominator share a root at 1
// (the degenerate corner a = b = 1) the common factor is deflated first and
// the residuals report the derivatives of the reduced map.
inline std::pair<double, double> verify_double_critical(const BlaschkeParameters& p) {
  QuadraticRationalMap F = p.map();
  poly::Coeffs n = F.num, d = F.den;
  auto value_at_one = [](const poly::Coeffs& c) { return poly::eval(c, Complex(1, 0)); };
  // deflate common roots at z = 1: divide by (z - 1) via synthetic division
  auto deflate = [](poly::Coeffs& c) {
    // c(z) = (z - 1) q(z); q has degree one less
    poly::Coeffs q{};
    Complex carry(0, 0);
    for (int k = 3; k >= 1; --k) {
      carry = c[static_cast<std::size_t>(k)] + carry;
      q[static_cast<std::size_t>(k - 1)] = carry;
    }
    c = q;
  };
  int guard = 0;
  while (std::abs(value_at_one(n)) < 1e-12 && std::abs(value_at_one(d)) < 1e-12 && guard < 3) {
    deflate(n);
    deflate(d);
    ++guard;
  }
  QuadraticRationalMap G;
  G.num = n;
  G.den = d;
  double r1 = std::abs(G.derivative(Complex(1, 0)));
  double r2 = std::abs(G.second_derivative(Complex(1, 0)));
  return {r1, r2};
}

struct NormalFormReport {
  Complex multiplier_at_0;   // must be -r
  Complex nu;                // cubic normal-form coefficient
  double residual = 0.0;     // |z^2 coefficient| after the quadratic substitution
};

namespace detail {

// Power series of F_{a,b} at 0, exact in the coefficients: the numerator is
// the cubic u z (z^2 - (a+b) z + ab), the denominator expands by geometric
// series.
template <int N>
Series<N> blaschke_series(const BlaschkeParameters& p) {
  Complex u = -std::exp(Complex(0, -p.theta));
  Series<N> numpoly;
  numpoly.c[1] = u * p.a * p.b;
  numpoly.c[2] = -u * (p.a + p.b);
  numpoly.c[3] = u;
  Series<N> inv = Series<N>::geometric(std::conj(p.a)) * Series<N>::geometric(std::conj(p.b));
  return numpoly * inv;
}

}  // namespace detail

// Local normal form of F at the fixed point 0: after z -> z + mu z^2 the
// image series is -r z (1 + nu z^2 + O(z^3)). Conjugating f = az + f2 z^2 by
// z + mu z^2 moves the quadratic coefficient to f2 + mu a(1-a); with a = -r
// the unique cancelling choice is mu = f2/(r(1+r)).
inline NormalFormReport normal_form_coefficients(const BlaschkeParameters& p,
                                                 double eps = 0.2) {
  if (!(p.r > 1.0 && p.r <= 1.0 + eps))
    throw RegimeError("normal form is computed for r in (1, 1+eps]");
  constexpr int N = 8;
  Series<N> F = detail::blaschke_series<N>(p);
  Complex lambda2 = F.c[2];
  Complex mu = lambda2 / (p.r * (1.0 + p.r));
  Series<N> psi;
  psi.c[1] = Complex(1, 0);
  psi.c[2] = mu;
  Series<N> H = psi.inverse().compose(F.compose(psi));
  NormalFormReport rep;
  rep.multiplier_at_0 = H.c[1];
  rep.residual = std::abs(H.c[2]);
  rep.nu = -H.c[3] / p.r;
  if (std::abs(rep.nu) < 1e-8)
    throw DegeneracyError("normal-form cubic coefficient vanished");
  return rep;
}

// Attracting 2-cycle of F near 0 for r > 1 close to 1. Newton on
// F^2(z) - z seeded from the normal-form prediction plus a ring fallback.
inline std::pair<PeriodicPoint, PeriodicPoint> find_attracting_two_cycle(
    const BlaschkeParameters& p) {
  if (!(p.r > 1.0))
    throw RegimeError("attracting 2-cycle exists for r > 1; reduce toward r = 1+");
  QuadraticRationalMap F = p.map();

  // normal-form prediction of the cycle location
  Complex seed_base;
  double scale = std::sqrt(std::max(p.r - 1.0, 1e-6));
  try {
    constexpr int N = 8;
    Series<N> Fs = detail::blaschke_series<N>(p);
    Complex lambda2 = Fs.c[2];
    Complex mu = lambda2 / (p.r * (1.0 + p.r));
    Series<N> psi;
    psi.c[1] = Complex(1, 0);
    psi.c[2] = mu;
    Series<N> H = psi.inverse().compose(Fs.compose(psi));
    Complex nu = -H.c[3] / p.r;
    Complex z2 = (1.0 / (p.r * p.r) - 1.0) / ((1.0 + p.r * p.r) * nu);
    Complex zs = std::sqrt(z2);
    seed_base = zs + mu * zs * zs;
  } catch (const NumericError&) {
    seed_base = Complex(0, scale);
  }

  std::vector<Complex> seeds{seed_base, -seed_base};
  for (int ring = 0; ring < 3; ++ring) {
    double rho = std::abs(seed_base) * (0.5 + 0.5 * ring);
    for (int k = 0; k < 8; ++k)
      seeds.push_back(rho * unit_angle((k + 0.5) / 8.0));
  }

  const Tolerances& t = tol();
  for (Complex z : seeds) {
    for (int it = 0; it < 60; ++it) {
      ComplexPoint w(z);
      for (int i = 0; i < 2; ++i) w = F.eval(w);
      if (w.infinite) break;
      Complex v = w.z - z;
      if (std::abs(v) < t.solver) break;
      Complex d = orbit_multiplier(F, z, 2) - 1.0;
      if (std::abs(d) < 1e-14) break;
      z -= v / d;
    }
    ComplexPoint w(z);
    for (int i = 0; i < 2; ++i) w = F.eval(w);
    if (w.infinite) continue;
    if (std::abs(w.z - z) > 1e-10) continue;
    if (std::abs(z) < 1e-8) continue;  // converged to the fixed point 0
    Complex zb = F.eval(ComplexPoint(z)).z;
    if (std::abs(zb - z) < 1e-10) continue;  // fixed, not 2-periodic
    Complex m = F.derivative(z) * F.derivative(zb);
    if (std::abs(m) >= 1.0) continue;
    if (std::abs(z) > 0.5 || std::abs(zb) > 0.5) continue;
    PeriodicPoint p1, p2;
    p1.location = ComplexPoint(z);
    p1.period = 2;
    p1.multiplier = ComplexPoint(m);
    p1.classification = classify_multiplier(m, t.classification);
    p1.residual = std::abs(w.z - z);
    p2 = p1;
    p2.location = ComplexPoint(zb);
    return {p1, p2};
  }
  throw RegimeError("no attracting 2-cycle found; r - 1 may be too large");
}

// Rotation number of F_{a,b}|S^1 as a function of theta at fixed r, and the
// inverse problem: find theta* with rotation number nu.
struct ThetaSolveResult {
  double theta = 0.0;
  double rotation = 0.0;
  double residual = 0.0;  // |rotation - nu|
  int probes = 0;
};

inline double blaschke_rotation(double r, double theta, int iterations, int lift_grid = 256) {
  auto p = solve_critical_parameters(r, theta);
  auto h = CircleMapHandle::blaschke_restriction(p.map(), lift_grid);
  return rotation_number(h, iterations, h.critical_angle).value;
}

inline ThetaSolveResult solve_theta_for_rotation(const ContinuedFraction& nu_cf, double r,
                                                 double target_tol = 1e-6,
                                                 std::int64_t bound_B = 64,
                                                 int bound_depth = 10) {
  if (nu_cf.rational_terminated)
    throw PreconditionError("rotation target must be irrational (bounded type)");
  if (nu_cf.depth() < bound_depth)
    throw PreconditionError("rotation target needs more continued-fraction depth");
  for (int i = 0; i < bound_depth; ++i)
    if (nu_cf.a[static_cast<std::size_t>(i)] > bound_B)
      throw PreconditionError("rotation target is not of bounded type at configured depth");
  if (!(r >= 1.0)) throw PreconditionError("solver expects r >= 1");
  const double nu = nu_cf.value();

  ThetaSolveResult out;
  auto measure = [&](double theta, int iters) {
    ++out.probes;
    return blaschke_rotation(r, theta, iters);
  };

  // 64-point profile; the lifted profile must be monotone up to measurement
  // noise and wind once around the circle (in either orientation).
  const int G = 64;
  std::vector<double> prof(G + 1);
  for (int j = 0; j <= G; ++j) prof[static_cast<std::size_t>(j)] = measure(kTwoPi * j / G, 3000);
  std::vector<double> incr(prof.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 1; j < prof.size(); ++j) {
    double d = prof[j] - prof[j - 1];
    d -= std::floor(d + 0.5);  // nearest representative
    incr[j] = d;
    total += d;
  }
  const int dir = total >= 0.0 ? 1 : -1;
  if (std::abs(std::abs(total) - 1.0) > 0.2)
    throw RegimeError("rotation profile does not wind once around the circle");
  std::vector<double> lifted(prof.size());
  lifted[0] = prof[0];
  for (std::size_t j = 1; j < prof.size(); ++j) {
    double d = incr[j];
    if (dir * d < -0.02) throw RegimeError("rotation profile not monotone in theta");
    lifted[j] = lifted[j - 1] + (dir > 0 ? std::max(d, 0.0) : std::min(d, 0.0));
  }

  // locate the bracket containing nu (mod 1)
  double fmin = std::min(lifted.front(), lifted.back());
  double fmax = std::max(lifted.front(), lifted.back());
  double target = nu;
  while (target < fmin) target += 1.0;
  while (target > fmax) target -= 1.0;
  int j0 = 0;
  for (int j = 0; j < G; ++j) {
    double a = lifted[static_cast<std::size_t>(j)];
    double b = lifted[static_cast<std::size_t>(j + 1)];
    if ((a <= target && target <= b) || (b <= target && target <= a)) {
      j0 = j;
      break;
    }
  }

  auto wrap_delta = [&](double rho) {
    double d = rho - nu;
    d -= std::floor(d + 0.5);
    return d;
  };
  auto measure_est = [&](double theta, int iters) {
    ++out.probes;
    auto pm = solve_critical_parameters(r, theta);
    auto h = CircleMapHandle::blaschke_restriction(pm.map(), 256);
    return rotation_number(h, iters, h.critical_angle);
  };

  // the profile is noisy at its budget: inflate by one cell each side and
  // verify the bracket actually straddles the target
  const double cell = kTwoPi / G;
  double lo = cell * (j0 - 1), hi = cell * (j0 + 2);
  for (int guard = 0; guard < 6; ++guard) {
    double dl = wrap_delta(measure_est(lo, 20000).value);
    double dh = wrap_delta(measure_est(hi, 20000).value);
    if (dir * dl <= 0.0 && dir * dh >= 0.0) break;
    lo -= cell;
    hi += cell;
  }

  int iters = 20000;
  const int max_iters = 800000;
  ThetaSolveResult best;
  best.residual = 1e9;
  RotationNumberEstimate last_est;
  for (int step = 0; step < 300 && hi - lo > 1e-15; ++step) {
    double mid = 0.5 * (lo + hi);
    auto est = measure_est(mid, iters);
    last_est = est;
    double delta = wrap_delta(est.value);
    if (std::abs(delta) < best.residual) {
      best.theta = mid;
      best.rotation = est.value;
      best.residual = std::abs(delta);
      best.probes = out.probes;
    }
    if (std::abs(delta) + est.error_bound < target_tol) {
      best.theta = mid;
      best.rotation = est.value;
      best.residual = std::abs(delta);
      best.probes = out.probes;
      return best;
    }
    if (std::abs(delta) <= est.error_bound && iters < max_iters) {
      iters *= 3;  // cannot resolve the side at this budget
      continue;
    }
    if (dir * delta < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if (best.residual < target_tol) return best;
  std::size_t m = last_est.closest_return_times.size();
  std::int64_t lp = m ? last_est.closest_return_winding[m - 1] : 0;
  std::int64_t lq = m ? last_est.closest_return_times[m - 1] : 1;
  throw PlateauError("bisection stagnated on a mode-locking plateau", lp, lq);
}

}  // namespace smating
