#pragma once

#include <functional>

#include "smating/addresses.hpp"
#include "smating/circle_map.hpp"
#include "smating/periodic_points.hpp"

namespace smating {

// Inverse branch of a degree-2 map: preimage of w nearest to ref.
using InverseBranch = std::function<Complex(Complex w, const ComplexPoint& ref)>;

inline InverseBranch quadratic_inverse(Complex c) {
  // f(z) = z^2 + c
  return [c](Complex w, const ComplexPoint& ref) {
    Complex s = std::sqrt(w - c);
    if (ref.infinite) return std::abs(s) >= 1.0 ? s : -s;
    return (std::norm(s - ref.z) <= std::norm(s + ref.z)) ? s : -s;
  };
}

inline InverseBranch basilica_rational_inverse(Complex a) {
  // R(z) = a/(z^2+2z): preimages -1 +- sqrt(1 + a/w)
  return [a](Complex w, const ComplexPoint& ref) {
    Complex s = std::abs(w) > 1e30 ? Complex(1, 0) : std::sqrt(1.0 + a / w);
    Complex z1 = -1.0 + s, z2 = -1.0 - s;
    if (ref.infinite) return std::abs(z1) >= std::abs(z2) ? z1 : z2;
    return (std::norm(z1 - ref.z) <= std::norm(z2 - ref.z)) ? z1 : z2;
  };
}

// Boundary polyline of a base bubble, parametrized over [0,1): internal
// angle for the superattracting charts, rotation coordinate for the Siegel
// charts. Parameter 0 carries the marked boundary point.
struct BaseChart {
  std::vector<Complex> verts;
  Complex marked;
  double convergence_residual = 0.0;

  int size() const { return static_cast<int>(verts.size()); }

  Complex point_at(double s) const {
    double x = frac(s) * size();
    int j = static_cast<int>(x) % size();
    int j1 = (j + 1) % size();
    double t = x - std::floor(x);
    return verts[static_cast<std::size_t>(j)] * (1.0 - t) +
           verts[static_cast<std::size_t>(j1)] * t;
  }

  // Boundary samples from parameter `from` to `to` along the shorter side.
  std::vector<Complex> path(double from, double to, int cap = 256) const {
    double d = circle_diff(to, from);
    int steps = std::min(cap, std::max(4, static_cast<int>(std::abs(d) * size())));
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
      out.push_back(point_at(from + d * i / steps));
    return out;
  }

  double diameter() const {
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Complex& v : verts) {
      lo_x = std::min(lo_x, v.real());
      hi_x = std::max(hi_x, v.real());
      lo_y = std::min(lo_y, v.imag());
      hi_y = std::max(hi_y, v.imag());
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
  }
};

// Superattracting base chart (the bubble of the critical 2-cycle point that
// plays the role of the base). Built by pulling a Boettcher-anchored circle
// back through the period-2 bubble cycle; the vertex of parameter s at level
// k+1 is the inverse image of the vertex of parameter 2s at level k.
//
//   cycle_a = base bubble (contains the degree-2 critical point)
//   cycle_b = its image bubble
inline BaseChart build_superattracting_chart(const InverseBranch& inv,
                                             const std::vector<Complex>& init_a,
                                             Complex init_b_ref, int levels,
                                             double* final_move = nullptr) {
  const int M = static_cast<int>(init_a.size());
  std::vector<Complex> a = init_a;
  std::vector<Complex> b(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j)
    b[static_cast<std::size_t>(j)] =
        inv(a[static_cast<std::size_t>(j)], ComplexPoint(init_b_ref));
  std::vector<Complex> na(static_cast<std::size_t>(M)), nb(static_cast<std::size_t>(M));
  double move = 0.0;
  for (int k = 0; k < levels; ++k) {
    move = 0.0;
    for (int j = 0; j < M; ++j) {
      na[static_cast<std::size_t>(j)] =
          inv(b[static_cast<std::size_t>((2 * j) % M)],
              ComplexPoint(a[static_cast<std::size_t>(j)]));
      move = std::max(move, std::abs(na[static_cast<std::size_t>(j)] -
                                     a[static_cast<std::size_t>(j)]));
    }
    for (int j = 0; j < M; ++j)
      nb[static_cast<std::size_t>(j)] =
          inv(na[static_cast<std::size_t>(j)],
              ComplexPoint(b[static_cast<std::size_t>(j)]));
    a.swap(na);
    b.swap(nb);
  }
  BaseChart chart;
  chart.verts = std::move(a);
  chart.marked = chart.verts[0];
  chart.convergence_residual = move;
  if (final_move) *final_move = move;
  return chart;
}

// Siegel base chart: the boundary is the closure of the critical orbit,
// resampled by sorting against the rotation coordinate frac(n nu) (exact
// integer arithmetic on a deep convergent).
inline BaseChart build_siegel_chart(const QuadraticRationalMap& f, Complex critical_point,
                                    const SturmianCoder& coder, int orbit_len = 100000,
                                    int M = 4096) {
  std::vector<Complex> pts(static_cast<std::size_t>(M));
  std::vector<bool> have(static_cast<std::size_t>(M), false);
  std::vector<double> coord_err(static_cast<std::size_t>(M), 1e300);
  ComplexPoint z(critical_point);
  const double qd = static_cast<double>(coder.q);
  std::int64_t pos = 0;  // n p mod q
  for (int n = 0; n < orbit_len; ++n) {
    double x = static_cast<double>(pos) / qd;  // frac(n nu)
    int j = static_cast<int>(std::floor(x * M + 0.5)) % M;
    double err = std::abs(circle_diff(x, static_cast<double>(j) / M));
    if (err < coord_err[static_cast<std::size_t>(j)]) {
      if (z.infinite) throw NumericError("critical orbit left the plane");
      pts[static_cast<std::size_t>(j)] = z.z;
      coord_err[static_cast<std::size_t>(j)] = err;
      have[static_cast<std::size_t>(j)] = true;
    }
    z = f.eval(z);
    if (z.infinite || std::abs(z.z) > 1e6)
      throw NumericError("critical orbit escaped; not a Siegel parameter at this precision");
    pos += coder.p;
    if (pos >= coder.q) pos -= coder.q;
  }
  // fill the rare unvisited slots by neighbour interpolation
  for (int j = 0; j < M; ++j) {
    if (have[static_cast<std::size_t>(j)]) continue;
    int l = j, r = j;
    while (!have[static_cast<std::size_t>((l + M) % M)]) --l;
    while (!have[static_cast<std::size_t>(r % M)]) ++r;
    Complex a = pts[static_cast<std::size_t>((l + M) % M)];
    Complex b = pts[static_cast<std::size_t>(r % M)];
    pts[static_cast<std::size_t>(j)] = (a + b) / 2.0;
  }
  BaseChart chart;
  chart.verts = std::move(pts);
  chart.marked = critical_point;
  chart.verts[0] = critical_point;
  return chart;
}

// Composable inverse-branch transport: refs hold the backward orbit of the
// most recently pulled base point, deepest last. Points are pulled along
// short boundary paths so every branch choice compares against a nearby
// anchor.
struct Trail {
  InverseBranch inv;
  std::vector<Complex> refs;

  explicit Trail(InverseBranch inverse) : inv(std::move(inverse)) {}

  int depth() const { return static_cast<int>(refs.size()); }

  Complex pull(Complex w) {
    Complex z = w;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      z = inv(z, ComplexPoint(refs[i]));
      refs[i] = z;
    }
    return z;
  }

  Complex pull_path(const std::vector<Complex>& path) {
    Complex out(0, 0);
    for (const Complex& w : path) out = pull(w);
    return out;
  }

  // Prepend the branch that carries the base structures into the child at an
  // attachment whose forward orbit (attachment, f(attachment), ...,
  // f^{g-1}(attachment)) is supplied.
  void extend(const std::vector<Complex>& attachment_orbit) {
    std::vector<Complex> nrefs(attachment_orbit.rbegin(), attachment_orbit.rend());
    nrefs.insert(nrefs.end(), refs.begin(), refs.end());
    refs.swap(nrefs);
  }
};

}  // namespace smating
