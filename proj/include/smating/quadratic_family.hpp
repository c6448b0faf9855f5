#pragma once

#include <cmath>
#include <vector>

#include "smating/rational_angle.hpp"
#include "smating/rational_map.hpp"

namespace smating {

// c = lambda/2 - lambda^2/4: the unique parameter whose f_c has a finite
// fixed point of multiplier lambda.
inline Complex c_from_multiplier(Complex lambda) {
  return lambda / 2.0 - lambda * lambda / 4.0;
}

// a = -8 lambda / (lambda - 1)^3: basilica-family analogue.
inline Complex a_from_multiplier(Complex lambda) {
  Complex d = lambda - Complex(1, 0);
  if (std::abs(d) == 0.0 || std::abs(lambda) == 0.0)
    throw DegeneracyError("multiplier formula degenerate at lambda in {0,1}");
  return -8.0 * lambda / (d * d * d);
}

struct EscapeResult {
  bool escaped = false;
  int iterations = 0;
  double final_modulus = 0.0;
};

inline EscapeResult mandelbrot_escape(Complex c, int max_iter = 10000, double radius = 4.0) {
  if (radius < 2.0) throw PreconditionError("escape radius must be >= 2");
  EscapeResult res;
  Complex z(0, 0);
  for (int i = 0; i < max_iter; ++i) {
    z = z * z + c;
    res.iterations = i + 1;
    double m = std::abs(z);
    res.final_modulus = m;
    if (m > radius) {
      res.escaped = true;
      return res;
    }
  }
  res.escaped = false;
  return res;
}

// Green's function of the basin of infinity by the escape-time asymptotic
// G = 2^{-n} log|f^n(z)|; 0 on the filled Julia set at this budget.
inline double green_level(Complex c, Complex z, int max_iter = 200) {
  for (int n = 0; n < max_iter; ++n) {
    double m = std::abs(z);
    if (m > 1e12) return std::log(m) / std::pow(2.0, n);
    z = z * z + c;
  }
  return 0.0;
}

struct ExternalRay {
  AngleSpec angle;
  std::vector<ComplexPoint> polyline;  // far field toward the Julia set
  ComplexPoint landing_estimate;
  double landing_error = 0.0;
  bool landed = false;
};

// Backward-iteration external ray for f_c. The anchor at angle 2^n t on the
// circle |phi| = R0 is pulled back n times through inverse branches
// +-sqrt(w - c); branches are chosen by continuity against the previous
// stage's backward orbit (parallel transport), far-field stages by exact
// angle matching. substeps points are produced per halving of the Green
// level.
inline ExternalRay trace_external_ray(Complex c, const AngleSpec& angle, int depth,
                                      int substeps = 4, double R0 = 1e4,
                                      double landing_tol = -1.0) {
  if (landing_tol < 0.0) landing_tol = tol().landing;
  if (mandelbrot_escape(c).escaped)
    throw PreconditionError("c escapes: external ray landing undefined at desk scale");

  ExternalRay ray;
  ray.angle = angle;

  const int K = depth * substeps;
  std::vector<Complex> prev;  // backward orbit of previous stage
  int prev_n = 0;
  std::vector<double> angles;  // 2^j t for exact bookkeeping
  angles.reserve(static_cast<std::size_t>(depth) + 2);
  if (angle.exact) {
    RationalAngle a = angle.q;
    for (int j = 0; j <= depth + 1; ++j) {
      angles.push_back(a.value());
      a = a.doubled();
    }
  } else {
    double v = angle.real_value;
    for (int j = 0; j <= depth + 1; ++j) {
      angles.push_back(v);
      v = v * 2.0;
      v -= std::floor(v);
    }
  }

  ray.polyline.push_back(ComplexPoint(R0 * unit_angle(angles[0])));
  for (int k = 1; k <= K; ++k) {
    int n = (k + substeps - 1) / substeps;  // pullbacks this stage
    double frac_level = n - static_cast<double>(k) / substeps;  // in [0,1)
    double Rk = std::pow(R0, std::pow(2.0, frac_level));
    std::vector<Complex> cur(static_cast<std::size_t>(n) + 1);
    cur[0] = Rk * unit_angle(angles[static_cast<std::size_t>(n)]);
    int shift = n - prev_n;
    for (int i = 1; i <= n; ++i) {
      Complex w = cur[static_cast<std::size_t>(i - 1)] - c;
      Complex s = std::sqrt(w);
      Complex ref;
      bool have_ref = false;
      int pidx = i - shift;
      if (pidx >= 0 && pidx < static_cast<int>(prev.size())) {
        ref = prev[static_cast<std::size_t>(pidx)];
        have_ref = true;
      }
      if (!have_ref) {
        // far field: choose the branch matching the target angle exactly
        double target = angles[static_cast<std::size_t>(n - i)];
        Complex e = unit_angle(target);
        if (std::norm(s - std::abs(s) * e) > std::norm(s + std::abs(s) * e)) s = -s;
      } else {
        if (std::norm(s - ref) > std::norm(s + ref)) s = -s;
      }
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw TraceFailure("ray tracing step failure (non-finite pullback)");
      cur[static_cast<std::size_t>(i)] = s;
    }
    ray.polyline.push_back(ComplexPoint(cur.back()));
    prev = std::move(cur);
    prev_n = n;
  }

  // Landing: last 5 points mutually within tolerance.
  std::size_t m = ray.polyline.size();
  std::size_t tail = std::min<std::size_t>(5, m);
  double diam = 0.0;
  for (std::size_t i = m - tail; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      diam = std::max(diam, planar_distance(ray.polyline[i], ray.polyline[j]));
  ray.landing_estimate = ray.polyline.back();
  ray.landing_error = diam;
  ray.landed = diam < landing_tol;
  return ray;
}

inline ComplexPoint caratheodory_point(Complex c, const AngleSpec& angle, int depth,
                                       int substeps = 4) {
  ExternalRay ray = trace_external_ray(c, angle, depth, substeps);
  return ray.landing_estimate;
}

}  // namespace smating
