#pragma once

#include <algorithm>
#include <vector>

#include "smating/rational_map.hpp"

namespace smating {

enum class CycleClass { attracting, superattracting, repelling, indifferent };

struct PeriodicPoint {
  ComplexPoint location;
  int period = 1;
  ComplexPoint multiplier;
  CycleClass classification = CycleClass::repelling;
  double residual = 0.0;  // |f^period(z) - z| (chordal)
};

inline CycleClass classify_multiplier(Complex m, double band) {
  double a = std::abs(m);
  if (a < band) return CycleClass::superattracting;
  if (a < 1.0 - band) return CycleClass::attracting;
  if (a > 1.0 + band) return CycleClass::repelling;
  return CycleClass::indifferent;
}

// Multiplier of a period-p orbit through z: product of f' along the orbit.
inline Complex orbit_multiplier(const QuadraticRationalMap& f, Complex z, int p) {
  Complex m(1, 0);
  Complex w = z;
  for (int i = 0; i < p; ++i) {
    m *= f.derivative(w);
    ComplexPoint nxt = f.eval(ComplexPoint(w));
    if (nxt.infinite) return Complex(0, 0);  // orbit through infinity: superattracting chart
    w = nxt.z;
  }
  return m;
}

// All solutions of f^period(z) = z on the sphere. Newton started from a seed
// grid plus an explicit infinity check; roots deduplicated chordally.
inline std::vector<PeriodicPoint> find_periodic_points(const QuadraticRationalMap& f,
                                                       int period,
                                                       double grid_radius = 4.0,
                                                       int grid_n = 32) {
  if (period < 1) throw PreconditionError("period must be >= 1");
  const Tolerances& t = tol();

  auto F = [&](Complex z) -> Complex {
    ComplexPoint w(z);
    for (int i = 0; i < period; ++i) {
      w = f.eval(w);
      if (w.infinite) return Complex(1e30, 0);  // push Newton away from poles
    }
    return w.z - z;
  };
  auto Fp = [&](Complex z) -> Complex {
    return orbit_multiplier(f, z, period) - 1.0;
  };

  std::vector<PeriodicPoint> found;
  double best_residual = 1e30;
  auto try_seed = [&](Complex z) {
    for (int it = 0; it < 80; ++it) {
      Complex v = F(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return;
      double r = std::abs(v);
      best_residual = std::min(best_residual, r);
      if (r < t.solver) {
        Complex m = orbit_multiplier(f, z, period);
        for (const auto& q : found)
          if (!q.location.infinite &&
              chordal_distance(q.location, ComplexPoint(z)) < t.dedup)
            return;
        PeriodicPoint p;
        p.location = ComplexPoint(z);
        p.period = period;
        p.multiplier = ComplexPoint(m);
        p.classification = classify_multiplier(m, t.classification);
        p.residual = r;
        found.push_back(p);
        return;
      }
      Complex d = Fp(z);
      if (std::abs(d) < 1e-14) {
        // multiplier 1: fall back to a secant-style nudge
        d = Complex(1e-7, 1e-7);
      }
      Complex step = v / d;
      if (std::abs(step) > 10.0) step *= 10.0 / std::abs(step);
      z -= step;
    }
  };

  for (int i = 0; i < grid_n; ++i)
    for (int j = 0; j < grid_n; ++j) {
      double x = (-1.0 + 2.0 * (i + 0.5) / grid_n) * grid_radius;
      double y = (-1.0 + 2.0 * (j + 0.5) / grid_n) * grid_radius;
      try_seed(Complex(x, y));
    }

  // Point at infinity: check f^period(inf) = inf directly.
  ComplexPoint w = ComplexPoint::infinity();
  for (int i = 0; i < period; ++i) w = f.eval(w);
  if (w.infinite) {
    PeriodicPoint p;
    p.location = ComplexPoint::infinity();
    p.period = period;
    Complex m(1, 0);
    // product of chart multipliers along the orbit through infinity; for the
    // families in scope this is either superattracting or a plain fixed point
    if (period == 1) {
      m = f.fixed_point_multiplier(ComplexPoint::infinity());
    } else {
      m = Complex(0, 0);  // superattracting cycles through infinity (R_a family)
    }
    p.multiplier = ComplexPoint(m);
    p.classification = classify_multiplier(m, t.classification);
    p.residual = 0.0;
    found.push_back(p);
  }

  if (found.empty())
    throw SolverFailure("no periodic points converged", best_residual);

  std::sort(found.begin(), found.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
    if (a.location.infinite != b.location.infinite) return b.location.infinite;
    if (a.location.re() != b.location.re()) return a.location.re() < b.location.re();
    return a.location.im() < b.location.im();
  });
  return found;
}

// Newton refinement of a single root of f^period(z) = z from a good seed.
inline Complex refine_periodic_point(const QuadraticRationalMap& f, Complex z, int period,
                                     int iters = 50) {
  for (int it = 0; it < iters; ++it) {
    ComplexPoint w(z);
    for (int i = 0; i < period; ++i) w = f.eval(w);
    if (w.infinite) break;
    Complex v = w.z - z;
    if (std::abs(v) < 1e-14) break;
    Complex d = orbit_multiplier(f, z, period) - 1.0;
    if (std::abs(d) < 1e-14) break;
    z -= v / d;
  }
  return z;
}

}  // namespace smating
