#pragma once

#include <algorithm>
#include <string>

#include "smating/circle_map.hpp"

namespace smating {

// Closed circle arc stored as (start, length) with length in (0,1); avoids
// wraparound ambiguity.
struct CircleArc {
  double start = 0.0;
  double length = 0.0;
  std::string label;
  double end() const { return frac(start + length); }
  bool contains(double x, double eps = 0.0) const {
    double d = frac(x - start);
    return d <= length + eps;
  }
};

struct DynamicalPartition {
  int level = 0;
  std::int64_t q_n = 0;
  std::int64_t q_n1 = 0;
  std::vector<CircleArc> atoms;  // q_{n+1} + q_n arcs covering the circle
};

namespace detail {

// Signed arc from a to b: (start, length) choosing the orientation that makes
// the arc run from a to b through the short side indicated by sign.
inline CircleArc arc_between(double a, double b, bool ccw) {
  CircleArc arc;
  if (ccw) {
    arc.start = frac(a);
    arc.length = frac(b - a);
  } else {
    arc.start = frac(b);
    arc.length = frac(a - b);
  }
  return arc;
}

}  // namespace detail

// Dynamical partition of level n for a circle map with a marked point
// (the critical point for the Blaschke restriction): the arcs
// f^i(A_n), i < q_{n+1} and f^i(A_{n+1}), i < q_n, where A_n is the arc
// between the marked point and its q_n-th iterate on the side of approach.
inline DynamicalPartition dynamical_partition(const CircleMapHandle& map, int level,
                                              int iteration_budget = 200000) {
  if (!map.monotone_checked)
    throw PreconditionError("dynamical_partition requires a verified lift");
  const double c = map.critical_angle;

  // Closest returns from the orbit of the marked point.
  RotationNumberEstimate rot = rotation_number(map, iteration_budget, c);
  if (!rot.converged)
    throw RegimeError("rotation number did not converge; partition unavailable");
  // Reject rational rotation numbers: the partition machinery assumes the
  // return times keep growing.
  if (level < 1) throw PreconditionError("partition level must be >= 1");
  if (static_cast<int>(rot.closest_return_times.size()) < level + 2)
    throw RegimeError("rotation number appears rational or too shallow for this level");

  std::int64_t qn = rot.closest_return_times[level - 1];  // q_n (times[k] = q_{k+1})
  std::int64_t qn1 = rot.closest_return_times[level];     // q_{n+1}
  if (qn1 + qn > iteration_budget)
    throw BudgetError("iteration budget exceeded for requested partition level");

  // Orbit of the marked point long enough for all atom endpoints.
  std::vector<double> orbit(static_cast<std::size_t>(qn1 + qn + 1));
  orbit[0] = frac(c);
  for (std::int64_t i = 1; i <= qn1 + qn; ++i) orbit[i] = map.angle_map(orbit[i - 1]);

  // A_n runs from c to f^{q_n}(c) on the approach side.
  auto critical_arc = [&](std::int64_t q) {
    double d = circle_diff(orbit[q], orbit[0]);
    return detail::arc_between(orbit[0], orbit[q], d > 0.0);
  };
  CircleArc an = critical_arc(qn);
  CircleArc an1 = critical_arc(qn1);

  DynamicalPartition part;
  part.level = level;
  part.q_n = qn;
  part.q_n1 = qn1;

  auto push_iterates = [&](const CircleArc& base, std::int64_t count, const std::string& tag) {
    // endpoints of f^i(base) are the orbit translates of the endpoints
    double s = base.start, e = base.end();
    std::vector<double> s_orbit{s}, e_orbit{e};
    for (std::int64_t i = 1; i < count; ++i) {
      s_orbit.push_back(map.angle_map(s_orbit.back()));
      e_orbit.push_back(map.angle_map(e_orbit.back()));
    }
    for (std::int64_t i = 0; i < count; ++i) {
      CircleArc a;
      // A homeomorphism preserves orientation, so the ccw order of the two
      // endpoints is preserved along iterates.
      a.start = s_orbit[static_cast<std::size_t>(i)];
      a.length = frac(e_orbit[static_cast<std::size_t>(i)] - a.start);
      a.label = "f^" + std::to_string(i) + "(" + tag + ")";
      part.atoms.push_back(a);
    }
  };
  std::string an_tag = "A_" + std::to_string(level);
  std::string an1_tag = "A_" + std::to_string(level + 1);
  push_iterates(an, qn1, an_tag);
  push_iterates(an1, qn, an1_tag);
  return part;
}

// Coverage residual: atoms sorted by start must tile the circle; returns the
// largest gap/overlap between consecutive endpoints.
inline double partition_coverage_residual(const DynamicalPartition& part) {
  std::vector<CircleArc> atoms = part.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const CircleArc& a, const CircleArc& b) { return a.start < b.start; });
  double worst = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const CircleArc& cur = atoms[i];
    const CircleArc& nxt = atoms[(i + 1) % atoms.size()];
    double gap = std::abs(circle_diff(nxt.start, cur.end()));
    worst = std::max(worst, gap);
    total += cur.length;
  }
  worst = std::max(worst, std::abs(total - 1.0));
  return worst;
}

// Maximum adjacent-atom length ratio max(d1/d2, d2/d1) over the sorted atoms.
inline double real_bounds_ratio(const DynamicalPartition& part) {
  std::vector<CircleArc> atoms = part.atoms;
  if (atoms.size() < 2) throw PreconditionError("partition too small");
  std::sort(atoms.begin(), atoms.end(),
            [](const CircleArc& a, const CircleArc& b) { return a.start < b.start; });
  double worst = 1.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    double d1 = atoms[i].length;
    double d2 = atoms[(i + 1) % atoms.size()].length;
    if (d1 <= 0.0 || d2 <= 0.0) throw RegimeError("degenerate atom in partition");
    worst = std::max(worst, std::max(d1 / d2, d2 / d1));
  }
  return worst;
}

}  // namespace smating
