#pragma once

#include <optional>

#include "smating/bubble_geometry.hpp"
#include "smating/quadratic_family.hpp"

namespace smating {

struct Bubble {
  BubbleModel model = BubbleModel::basilica;
  int generation = 0;
  BubbleAddress address;
  std::vector<Complex> boundary;  // closed polyline (coarse for chain bubbles)
  Complex root_point;
  Complex center_point;
};

struct BubbleRay {
  BubbleModel model = BubbleModel::basilica;
  std::vector<Bubble> bubbles;
  std::vector<Complex> attachment_points;
  AngleSpec external_angle;
  ComplexPoint landing_estimate;
  double landing_error = 0.0;
  bool landed = false;
  bool terminated = false;  // descent ended exactly on a bubble boundary point
};

// Everything the chain builder needs about one dynamical model (a polynomial
// model or one side of the candidate mating).
struct ChainContext {
  QuadraticRationalMap map;
  InverseBranch inv;
  BaseChart chart;
  BubbleModel combinatorics = BubbleModel::basilica;
  Complex base_center;                 // superattracting resp. Siegel center
  std::optional<SturmianCoder> coder;  // siegel combinatorics only
  int newton_iters = 60;
  // deck symmetry sigma with f(sigma(z)) = f(z), and the boundary preimage
  // of the marked point; together they disambiguate the sheet of a child
  // attached at the critical tangency (whose two preimages are exact
  // mirrors, so the tangency itself cannot serve as a branch anchor)
  std::function<Complex(Complex)> mirror;
  Complex marked_boundary_preimage{0, 0};

  Complex marked() const { return chart.marked; }

  // Boundary parameter of the attachment for a combinatorial entry.
  double entry_param(const RationalAngle& s) const { return s.value(); }
  double entry_param(int k) const {
    // frac(-k nu) from the exact convergent
    std::int64_t pos = static_cast<std::int64_t>(
        (static_cast<__int128>(k % coder->q) * coder->p) % coder->q);
    if (pos < 0) pos += coder->q;
    std::int64_t neg = (coder->q - pos) % coder->q;
    return static_cast<double>(neg) / static_cast<double>(coder->q);
  }

  // Newton-polished attachment point on the base boundary: the entry's
  // forward orbit reaches the marked point after `gen` steps.
  Complex polish_attachment(Complex seed, int gen) const {
    Complex z = seed;
    for (int it = 0; it < newton_iters; ++it) {
      ComplexPoint w(z);
      Complex deriv(1, 0);
      for (int i = 0; i < gen; ++i) {
        deriv *= map.derivative(w.z);
        w = map.eval(w);
        if (w.infinite) return seed;
      }
      Complex v = w.z - marked();
      if (std::abs(v) < 1e-13) break;
      if (std::abs(deriv) < 1e-14) break;
      Complex step = v / deriv;
      if (std::abs(step) > 0.3) step *= 0.3 / std::abs(step);
      z -= step;
    }
    return z;
  }

  struct EntryData {
    double param = 0.0;
    int gen_increment = 1;
    Complex attachment;              // base-chart coordinates
    std::vector<Complex> orbit;      // attachment, f(attachment), ...
  };

  EntryData entry_data(const RationalAngle& s) const {
    EntryData d;
    if (s.is_zero()) {  // pass through the root into the image bubble
      d.param = 0.0;
      d.gen_increment = 1;
      d.attachment = marked();
      d.orbit = {marked()};
      return d;
    }
    int m = 0;
    for (std::int64_t dd = s.den; dd > 1; dd /= 2) ++m;
    d.param = s.value();
    d.gen_increment = 2 * m - 1;
    d.attachment = polish_attachment(chart.point_at(d.param), 2 * m);
    d.orbit.resize(static_cast<std::size_t>(d.gen_increment));
    ComplexPoint w(d.attachment);
    for (int j = 0; j < d.gen_increment; ++j) {
      d.orbit[static_cast<std::size_t>(j)] = w.z;
      w = map.eval(w);
    }
    return d;
  }

  EntryData entry_data(int k) const {
    EntryData d;
    d.param = entry_param(k);
    d.gen_increment = k + 1;
    if (k == 0) {
      d.attachment = marked();
    } else {
      d.attachment = polish_attachment(chart.point_at(d.param), k);
    }
    d.orbit.resize(static_cast<std::size_t>(d.gen_increment));
    ComplexPoint w(d.attachment);
    for (int j = 0; j < d.gen_increment; ++j) {
      d.orbit[static_cast<std::size_t>(j)] = w.z;
      w = map.eval(w);
    }
    // the deepest anchor would be the critical tangency itself; replace it
    // with the mirror-sheet image of the marked point's boundary preimage
    Complex c1 = k >= 1 ? d.orbit[static_cast<std::size_t>(k - 1)] : marked_boundary_preimage;
    d.orbit.back() = mirror(c1);
    return d;
  }
};

// --------------------------- model construction ----------------------------

inline ChainContext make_basilica_context(int M = 4096, int levels = 60) {
  ChainContext ctx;
  ctx.map = QuadraticRationalMap::quadratic(Complex(-1, 0));
  ctx.inv = quadratic_inverse(Complex(-1, 0));
  ctx.combinatorics = BubbleModel::basilica;
  ctx.base_center = Complex(0, 0);
  std::vector<Complex> init(static_cast<std::size_t>(M));
  const double rho = 0.05;
  for (int j = 0; j < M; ++j)
    init[static_cast<std::size_t>(j)] =
        (rho / 2.0) * unit_angle(static_cast<double>(j) / M + 0.5);
  ctx.chart = build_superattracting_chart(ctx.inv, init, Complex(-1, 0), levels);
  // the parameter-0 vertex converges to the boundary fixed point
  ctx.chart.marked = refine_periodic_point(ctx.map, ctx.chart.verts[0], 1);
  ctx.mirror = [](Complex z) { return -z; };
  ctx.marked_boundary_preimage = -ctx.chart.marked;
  return ctx;
}

inline ChainContext make_siegel_context(const ContinuedFraction& nu, int M = 4096,
                                        int orbit_len = 100000) {
  ChainContext ctx;
  Complex lambda = unit_angle(nu.value());
  ctx.map = QuadraticRationalMap::quadratic(c_from_multiplier(lambda));
  ctx.inv = quadratic_inverse(ctx.map.param_c);
  ctx.combinatorics = BubbleModel::siegel;
  ctx.coder.emplace(nu);
  ctx.base_center = lambda / 2.0;  // the Siegel fixed point of f_c
  ctx.chart = build_siegel_chart(ctx.map, Complex(0, 0), *ctx.coder, orbit_len, M);
  return ctx;
}

// The distinguished boundary point of the base bubble: the repelling
// boundary fixed point for the basilica, the critical point for the Siegel
// model.
inline Complex alpha_point(const ChainContext& ctx) { return ctx.marked(); }

// ------------------------------ chain builder ------------------------------

struct ChainBuildOptions {
  int gen_budget = 240;
  bool with_boundaries = false;
  int boundary_verts = 64;
  int path_cap = 192;
};

namespace detail {

template <typename Entry>
BubbleRay build_chain(const ChainContext& ctx, const std::vector<Entry>& entries,
                      bool terminated, const RationalAngle& terminal_angle,
                      const AngleSpec& angle, const ChainBuildOptions& opt) {
  BubbleRay ray;
  ray.model = ctx.combinatorics;
  ray.external_angle = angle;
  ray.terminated = false;

  Trail trail(ctx.inv);
  int gen = 0;

  auto coarse_boundary = [&](const Trail& t) {
    std::vector<Complex> out;
    if (!opt.with_boundaries) return out;
    Trail copy = t;
    int n = opt.boundary_verts;
    out.reserve(static_cast<std::size_t>(n));
    // walk the base polyline once around, pulling by continuity
    for (int j = 0; j <= n; ++j) {
      Complex w = ctx.chart.point_at(static_cast<double>(j % n) / n);
      out.push_back(copy.depth() == 0 ? w : copy.pull(w));
    }
    return out;
  };

  // base bubble
  {
    Bubble base;
    base.model = ctx.combinatorics;
    base.generation = 0;
    base.address.model = ctx.combinatorics;
    base.boundary = opt.with_boundaries
                        ? std::vector<Complex>(ctx.chart.verts.begin(), ctx.chart.verts.end())
                        : std::vector<Complex>{};
    base.root_point = ctx.marked();
    base.center_point = ctx.base_center;
    ray.bubbles.push_back(std::move(base));
  }

  BubbleAddress addr;
  addr.model = ctx.combinatorics;
  for (const Entry& e : entries) {
    auto data = ctx.entry_data(e);
    if (gen + data.gen_increment > opt.gen_budget)
      throw BudgetError("chain generation budget exceeded");
    // attachment in deep coordinates: pull the base attachment point along
    // the boundary path from the marked point
    Complex deep;
    if (trail.depth() == 0) {
      deep = data.attachment;
    } else {
      auto path = ctx.chart.path(0.0, data.param, opt.path_cap);
      path.push_back(data.attachment);
      deep = trail.pull_path(path);
    }
    ray.attachment_points.push_back(deep);
    trail.extend(data.orbit);
    gen += data.gen_increment;

    if constexpr (std::is_same_v<Entry, RationalAngle>)
      addr.angles.push_back(e);
    else
      addr.generations.push_back(e);

    Bubble b;
    b.model = ctx.combinatorics;
    b.generation = gen;
    b.address = addr;
    b.root_point = deep;
    b.boundary = coarse_boundary(trail);
    {
      Trail copy = trail;
      auto path = ctx.chart.path(0.0, 0.0, 8);  // stay at the marked point
      (void)path;
      b.center_point = copy.pull(ctx.base_center);
    }
    ray.bubbles.push_back(std::move(b));
  }

  if (terminated) {
    // the ray lands exactly on a boundary point of the deepest bubble
    Complex base_pt;
    if (terminal_angle.is_zero()) {
      base_pt = ctx.marked();
    } else if ((terminal_angle.den & (terminal_angle.den - 1)) == 0) {
      int m = 0;
      for (std::int64_t dd = terminal_angle.den; dd > 1; dd /= 2) ++m;
      base_pt = ctx.polish_attachment(ctx.chart.point_at(terminal_angle.value()), 2 * m);
    } else {
      // periodic non-dyadic boundary point: the chart itself is the estimate
      base_pt = ctx.chart.point_at(terminal_angle.value());
    }
    Complex deep = base_pt;
    if (trail.depth() > 0) {
      auto path = ctx.chart.path(0.0, terminal_angle.value(), opt.path_cap);
      path.push_back(base_pt);
      deep = trail.pull_path(path);
    }
    ray.terminated = true;
    ray.landing_estimate = ComplexPoint(deep);
    ray.landing_error = 0.0;
    ray.landed = true;
    return ray;
  }

  // landing from the attachment tail
  std::size_t n = ray.attachment_points.size();
  if (n == 0) throw ConstructionError("empty chain");
  ray.landing_estimate = ComplexPoint(ray.attachment_points.back());
  double diam = 0.0;
  std::size_t tail = std::min<std::size_t>(3, n);
  for (std::size_t i = n - tail; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      diam = std::max(diam, std::abs(ray.attachment_points[i] - ray.attachment_points[j]));
  ray.landing_error = diam;
  ray.landed = diam < tol().landing * 10;
  return ray;
}

}  // namespace detail

// Bubble ray of exact rational angle t, truncated at `depth` bubbles past
// the base. The defining external angle is -t for the basilica-combinatorics
// side and +t for the Siegel side.
inline BubbleRay bubble_ray(const ChainContext& ctx, const RationalAngle& t, int depth,
                            const ChainBuildOptions& opt = {}) {
  if (ctx.combinatorics == BubbleModel::basilica) {
    auto d = basilica_descend(t.negated(), depth);
    return detail::build_chain<RationalAngle>(ctx, d.entries, d.terminated, d.terminal_angle,
                                              AngleSpec(t), opt);
  }
  auto d = siegel_descend(*ctx.coder, t, depth);
  return detail::build_chain<int>(ctx, d.entries, false, RationalAngle(0, 1), AngleSpec(t),
                                  opt);
}

// ----------------------------- enumeration ---------------------------------

// All bubbles of generation <= max_generation, built by depth-first trail
// extension over the combinatorial address tree.
inline std::vector<Bubble> enumerate_bubbles(const ChainContext& ctx, int max_generation,
                                             int budget_cap = 12,
                                             int boundary_verts = 64) {
  if (max_generation > budget_cap)
    throw BudgetError("enumeration budget exceeded");
  std::vector<Bubble> out;

  ChainBuildOptions opt;
  opt.with_boundaries = true;
  opt.boundary_verts = boundary_verts;

  struct Frame {
    Trail trail;
    BubbleAddress addr;
    int gen;
    double anchor_param;
  };

  auto boundary_of = [&](const Trail& t) {
    std::vector<Complex> b;
    Trail copy = t;
    for (int j = 0; j <= boundary_verts; ++j) {
      Complex w = ctx.chart.point_at(static_cast<double>(j % boundary_verts) / boundary_verts);
      b.push_back(copy.depth() == 0 ? w : copy.pull(w));
    }
    return b;
  };

  // base bubble
  {
    Bubble base;
    base.model = ctx.combinatorics;
    base.generation = 0;
    base.address.model = ctx.combinatorics;
    base.boundary = boundary_of(Trail(ctx.inv));
    base.root_point = ctx.marked();
    base.center_point = ctx.base_center;
    out.push_back(std::move(base));
  }

  // collect the admissible first-level entries for a remaining budget
  auto basilica_entries = [&](int remaining, bool allow_root_pass) {
    std::vector<RationalAngle> es;
    if (allow_root_pass && remaining >= 1) es.push_back(RationalAngle(0, 1));
    for (int m = 1; 2 * m - 1 <= remaining; ++m)
      for (std::int64_t k = 1; k < (std::int64_t(1) << m); k += 2)
        es.push_back(RationalAngle(k, std::int64_t(1) << m));
    return es;
  };

  std::function<void(const Trail&, const BubbleAddress&, int, bool)> recurse =
      [&](const Trail& trail, const BubbleAddress& addr, int gen, bool allow_root_pass) {
        int remaining = max_generation - gen;
        if (remaining <= 0) return;
        std::vector<std::pair<BubbleAddress, ChainContext::EntryData>> children;
        if (ctx.combinatorics == BubbleModel::basilica) {
          for (const RationalAngle& s : basilica_entries(remaining, allow_root_pass)) {
            auto data = ctx.entry_data(s);
            BubbleAddress a = addr;
            a.angles.push_back(s);
            children.emplace_back(std::move(a), std::move(data));
          }
        } else {
          for (int k = 0; k + 1 <= remaining; ++k) {
            auto data = ctx.entry_data(k);
            BubbleAddress a = addr;
            a.generations.push_back(k);
            children.emplace_back(std::move(a), std::move(data));
          }
        }
        for (auto& [a, data] : children) {
          Trail child = trail;
          Complex deep;
          if (child.depth() == 0) {
            deep = data.attachment;
          } else {
            auto path = ctx.chart.path(0.0, data.param, 128);
            path.push_back(data.attachment);
            deep = child.pull_path(path);
          }
          child.extend(data.orbit);
          Bubble b;
          b.model = ctx.combinatorics;
          b.generation = gen + data.gen_increment;
          b.address = a;
          b.root_point = deep;
          b.boundary = boundary_of(child);
          {
            Trail c2 = child;
            b.center_point = c2.pull(ctx.base_center);
          }
          out.push_back(b);
          recurse(child, a, gen + data.gen_increment, false);
        }
      };

  BubbleAddress root;
  root.model = ctx.combinatorics;
  recurse(Trail(ctx.inv), root, 0, ctx.combinatorics == BubbleModel::basilica);
  return out;
}

}  // namespace smating
