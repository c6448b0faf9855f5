#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "smating/continued_fraction.hpp"
#include "smating/rational_map.hpp"

namespace smating {

inline double frac(double x) {
  double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

// Signed circular distance in (-1/2, 1/2].
inline double circle_diff(double a, double b) {
  double d = frac(a - b);
  return d > 0.5 ? d - 1.0 : d;
}

// Orientation-preserving circle homeomorphism handled through its angle map
// on [0,1). Monotone degree-1 lift data is validated on a sampling grid at
// construction; the displacement representative in [0,1) is well defined as
// long as the map has no fixed point on the circle.
struct CircleMapHandle {
  std::function<double(double)> angle_map;  // x in [0,1) -> g(x) in [0,1)
  double critical_angle = 0.0;              // marked critical point (angle)
  bool has_critical = false;
  bool monotone_checked = false;

  static CircleMapHandle rigid_rotation(double nu) {
    CircleMapHandle h;
    double r = frac(nu);
    h.angle_map = [r](double x) { return frac(x + r); };
    h.monotone_checked = true;
    return h;
  }

  // Restriction of a circle-preserving rational map to the unit circle.
  // The marked critical angle is 0 for the Blaschke family (z = 1).
  static CircleMapHandle blaschke_restriction(const QuadraticRationalMap& f,
                                              int grid = 4096) {
    CircleMapHandle h;
    h.angle_map = [f](double x) {
      Complex w = f.eval(ComplexPoint(unit_angle(x))).z;
      double t = std::atan2(w.imag(), w.real()) / kTwoPi;
      return frac(t);
    };
    h.critical_angle = 0.0;
    h.has_critical = true;
    h.verify_monotone_lift(grid);
    return h;
  }

  // Conjugation by a rigid rotation: x -> g(x - c) + c.
  CircleMapHandle conjugated_by_rotation(double c) const {
    CircleMapHandle h = *this;
    auto base = angle_map;
    double cc = frac(c);
    h.angle_map = [base, cc](double x) { return frac(base(frac(x - cc)) + cc); };
    h.critical_angle = frac(critical_angle + cc);
    return h;
  }

  double displacement(double x) const {  // lift increment in [0,1)
    return frac(angle_map(x) - x);
  }

  // Degree-1 monotone lift check on a uniform grid. The displacement branch
  // is tracked by continuity so maps whose displacement range straddles an
  // integer (rotation number near 0) are handled. Throws on violation.
  void verify_monotone_lift(int grid) {
    const double d0 = displacement(0.0);
    double dprev = d0;
    double lift_prev = d0;
    for (int i = 1; i <= grid; ++i) {
      double x = static_cast<double>(i) / grid;
      double d = displacement(frac(x));
      while (d - dprev > 0.5) d -= 1.0;
      while (d - dprev < -0.5) d += 1.0;
      double lift = x + d;
      if (lift < lift_prev - 1e-9)
        throw RegimeError("circle map restriction is not a monotone degree-1 homeomorphism");
      lift_prev = lift;
      dprev = d;
    }
    if (std::abs(dprev - d0) > 0.5)
      throw RegimeError("circle map restriction is not a degree-1 lift");
    monotone_checked = true;
  }
};

struct RotationNumberEstimate {
  double value = 0.0;
  double error_bound = 1.0;
  std::vector<std::int64_t> closest_return_times;  // q_1 < q_2 < ...
  std::vector<std::int64_t> closest_return_winding;  // matching p_n
  bool converged = false;
};

// Combinatorial rotation number: accumulate exact lift increments along the
// orbit of x0 and detect closest returns; |rho - p_n/q_n| < 1/(q_n q_{n+1})
// gives the reported error bound. For a rigid rotation the mean displacement
// is exact to rounding.
inline RotationNumberEstimate rotation_number(const CircleMapHandle& map, int iterations,
                                              double x0 = 0.0) {
  if (!map.monotone_checked)
    throw PreconditionError("rotation_number requires a verified monotone lift");
  RotationNumberEstimate est;
  const double start = frac(x0);

  // Pass 1: raw displacements along the orbit. The displacement function of
  // a degree-1 homeomorphism has total variation < 1, so a single branch
  // offset around the circular mean recovers the true lift increments even
  // when the range straddles an integer.
  std::vector<double> disp(static_cast<std::size_t>(iterations));
  std::vector<double> pts(static_cast<std::size_t>(iterations));
  {
    double x = start;
    for (std::int64_t n = 0; n < iterations; ++n) {
      double d = map.displacement(x);
      disp[static_cast<std::size_t>(n)] = d;
      x = map.angle_map(x);
      pts[static_cast<std::size_t>(n)] = x;
    }
  }
  double cs = 0.0, sn = 0.0;
  for (double d : disp) {
    cs += std::cos(kTwoPi * d);
    sn += std::sin(kTwoPi * d);
  }
  double dbar = std::atan2(sn, cs) / kTwoPi;  // circular mean in (-1/2, 1/2]

  double lift = 0.0, comp = 0.0;  // Kahan-accumulated displacement
  double best = 1.0;
  double lift_at_best = 0.0;
  std::int64_t best_q = 0;
  for (std::int64_t n = 1; n <= iterations; ++n) {
    double d = disp[static_cast<std::size_t>(n - 1)];
    while (d - dbar > 0.5) d -= 1.0;
    while (d - dbar < -0.5) d += 1.0;
    double y = d - comp;
    double t = lift + y;
    comp = (t - lift) - y;
    lift = t;
    double x = pts[static_cast<std::size_t>(n - 1)];
    double dist = std::abs(circle_diff(x, start));
    if (dist < best) {
      best = dist;
      est.closest_return_times.push_back(n);
      est.closest_return_winding.push_back(static_cast<std::int64_t>(std::llround(lift)));
      lift_at_best = lift;
      best_q = n;
    }
  }
  std::size_t m = est.closest_return_times.size();
  if (m >= 2 && best_q > 0) {
    // lift slope at the last closest return; exact for a rigid rotation and
    // bounded by the convergent estimate for a general homeomorphism.
    est.value = lift_at_best / static_cast<double>(best_q);
    double qn = static_cast<double>(est.closest_return_times[m - 2]);
    double qn1 = static_cast<double>(est.closest_return_times[m - 1]);
    est.error_bound = std::max(1.0 / (qn * qn1), 1e-15);
    est.converged = true;
  } else {
    est.value = lift / static_cast<double>(iterations);
    est.error_bound = 1.0 / static_cast<double>(iterations);
    est.converged = false;
  }
  est.value = frac(est.value);  // representative in [0,1)
  return est;
}

}  // namespace smating
