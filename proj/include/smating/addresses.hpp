#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "smating/continued_fraction.hpp"
#include "smating/rational_angle.hpp"

namespace smating {

// ---------------------------------------------------------------------------
// Angle combinatorics of bubble chains.
//
// Both polynomial models carry an exact symbolic descent that converts an
// external angle into the sequence of attachment points a chain of bubbles
// passes through, one entry per bubble.
//
// Basilica side: external angles landing on the boundary of the base bubble
// form a Cantor set inside the arc [2/3, 4/3]. Halving the internal angle
// corresponds to the windows
//     internal [0,1/2]  <->  u in [2/3, 5/6]
//     internal [1/2,1]  <->  u in [7/6, 4/3]
// and the second iterate of the map quadruples u. Angles falling in the open
// middle window (5/6, 7/6) leave through the attachment point at the current
// dyadic midpoint; the window (1/3, 2/3) is the wake behind the root and can
// only be entered at the very start (the chain then passes through the image
// of the base bubble). All arithmetic is exact on rationals.
//
// Siegel side: rays landing on the Siegel boundary are coded by the rotation
// number. The monotone angle parametrization T with T(x + nu) = 2 T(x) jumps
// by 2^{-k-1} exactly at the backward orbit points x = -k nu, and the binary
// digits of its one-sided values are the Sturmian stream
//     digit_j(T(x^+)) = [ frac(x + (j-1) nu) in [1-nu, 1) ].
// A rational angle therefore lies in exactly one jump gap; the gap index is
// the generation of the attachment point its ray passes, and descending into
// the child renormalizes u -> 2^{k+1} u.
// ---------------------------------------------------------------------------

struct DescentTransform {
  int log2_factor = 0;        // u' = 2^f u - subtracted
  std::int64_t subtracted = 0;
};

inline RationalAngle invert_transforms(const std::vector<DescentTransform>& log,
                                       RationalAngle u_final) {
  // fold back: u = (u' + m) / 2^f, exact
  __int128 num = u_final.num, den = u_final.den;
  for (auto it = log.rbegin(); it != log.rend(); ++it) {
    num += static_cast<__int128>(it->subtracted) * den;
    den <<= it->log2_factor;
    __int128 a = num < 0 ? -num : num, b = den;
    while (b != 0) { __int128 t = a % b; a = b; b = t; }
    if (a > 1) { num /= a; den /= a; }
    if (den > INT64_MAX) throw NumericError("angle reconstruction overflow");
  }
  return RationalAngle(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

// --------------------------- basilica descent ------------------------------

struct BasilicaDescent {
  // attachment internal angles, one per chain step; the rational 0 denotes
  // the pass through the root into the image of the base bubble (legal only
  // as the first step)
  std::vector<RationalAngle> entries;
  std::vector<int> gen_increments;
  bool terminated = false;          // ray lands on a bubble boundary point
  RationalAngle terminal_angle;     // internal angle of that point
  std::vector<DescentTransform> log;
  RationalAngle final_u;            // frame angle when the descent stopped
};

// Descend the external-ray angle u0 through the basilica bubble tree.
inline BasilicaDescent basilica_descend(RationalAngle u0, int max_entries) {
  const RationalAngle third(1, 3), two_thirds(2, 3);
  const RationalAngle five_sixths(5, 6), one_sixth(1, 6);
  BasilicaDescent out;
  RationalAngle u = u0;

  auto apply = [&](int f) {
    __int128 scaled = static_cast<__int128>(u.num) << f;
    std::int64_t m = static_cast<std::int64_t>(scaled / u.den);
    out.log.push_back({f, m});
    u = u.times_pow2(f);
  };

  if (u == third || u == two_thirds) {
    out.terminated = true;
    out.terminal_angle = RationalAngle(0, 1);
    out.final_u = u;
    return out;
  }
  if (u.in_open_arc(third, two_thirds)) {
    out.entries.push_back(RationalAngle(0, 1));  // through the root
    out.gen_increments.push_back(1);
    apply(1);
  }

  while (static_cast<int>(out.entries.size()) < max_entries) {
    RationalAngle prefix(0, 1);
    int k = 0;
    std::vector<RationalAngle> seen;   // digit-loop states for cycle detection
    std::vector<int> bits;
    for (;;) {
      // A repeating state without an exit means the ray lands on the current
      // bubble boundary at the eventually periodic internal angle.
      for (std::size_t i = 0; i < seen.size(); ++i) {
        if (seen[i] == u) {
          std::int64_t pre = static_cast<std::int64_t>(i);
          std::int64_t cyc = static_cast<std::int64_t>(bits.size()) - pre;
          __int128 cval = 0;
          for (std::size_t j = i; j < bits.size(); ++j)
            cval = cval * 2 + bits[j];
          // s = 0.b_0..b_{pre-1} (b_pre..)^infty exactly
          __int128 num = 0;
          for (std::int64_t j = 0; j < pre; ++j) num = num * 2 + bits[static_cast<std::size_t>(j)];
          __int128 den_pre = static_cast<__int128>(1) << pre;
          __int128 den_cyc = (static_cast<__int128>(1) << cyc) - 1;
          __int128 nn = num * den_cyc + cval;
          __int128 dd = den_pre * den_cyc;
          auto g128 = [](__int128 a, __int128 b) {
            while (b != 0) { __int128 t = a % b; a = b; b = t; }
            return a < 0 ? -a : a;
          };
          __int128 g = g128(nn, dd);
          if (g > 1) { nn /= g; dd /= g; }
          if (dd > INT64_MAX) throw NumericError("terminal angle overflow");
          out.terminated = true;
          out.terminal_angle = RationalAngle(static_cast<std::int64_t>(nn),
                                             static_cast<std::int64_t>(dd));
          out.final_u = u;
          return out;
        }
      }
      seen.push_back(u);
      if (u == two_thirds) {  // boundary point at the window's left end
        out.terminated = true;
        out.terminal_angle = prefix;
        out.final_u = u;
        return out;
      }
      if (u == third) {  // right end: prefix + 2^{-k}
        out.terminated = true;
        out.terminal_angle = prefix.plus(RationalAngle(1, std::int64_t(1) << k));
        out.final_u = u;
        return out;
      }
      RationalAngle star = prefix.plus(RationalAngle(1, std::int64_t(2) << k));
      if (u == five_sixths || u == one_sixth) {  // lands at the attachment
        out.terminated = true;
        out.terminal_angle = star;
        out.final_u = u;
        return out;
      }
      if (u.in_open_arc(five_sixths, one_sixth)) {  // exit into the child
        out.entries.push_back(star);
        out.gen_increments.push_back(2 * (k + 1) - 1);
        apply(1);
        break;
      }
      if (u.in_open_arc(two_thirds, five_sixths)) {  // digit 0
        bits.push_back(0);
        apply(2);
        ++k;
        continue;
      }
      if (u.in_open_arc(one_sixth, third)) {  // digit 1
        bits.push_back(1);
        prefix = prefix.plus(RationalAngle(1, std::int64_t(2) << k));
        apply(2);
        ++k;
        continue;
      }
      throw ConstructionError("basilica descent left the landing window");
    }
  }
  out.final_u = u;
  return out;
}

// The pair of external angles landing at the boundary point of the base
// bubble with dyadic internal angle s = 0.b_1...b_{m-1}1: invert the digit
// windows from the two one-sided window endpoints.
inline std::pair<RationalAngle, RationalAngle> basilica_ray_pair(const RationalAngle& s) {
  if (s.is_zero()) return {RationalAngle(1, 3), RationalAngle(2, 3)};
  if ((s.den & (s.den - 1)) != 0)
    throw PreconditionError("attachment angles are dyadic");
  // digits of s = 0.b_1...b_{m-1}1, most significant first, final 1 dropped
  std::vector<int> bits;
  {
    auto d = s.binary_digits();
    int m = 0;
    for (std::int64_t dd = s.den; dd > 1; dd /= 2) ++m;
    for (int i = 0; i < m - 1; ++i) bits.push_back(d.next());
  }
  auto invert_digits = [&](RationalAngle u) {
    for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
      // u = (u' + j)/4 constrained to the digit window
      RationalAngle lo = (*it == 0) ? RationalAngle(2, 3) : RationalAngle(1, 6);
      RationalAngle hi = (*it == 0) ? RationalAngle(5, 6) : RationalAngle(1, 3);
      bool found = false;
      for (std::int64_t j = 0; j < 4 && !found; ++j) {
        __int128 nn = static_cast<__int128>(u.num) + static_cast<__int128>(j) * u.den;
        __int128 dd = static_cast<__int128>(u.den) * 4;
        auto g128 = [](__int128 a, __int128 b) {
          while (b != 0) { __int128 t = a % b; a = b; b = t; }
          return a < 0 ? -a : a;
        };
        __int128 g = g128(nn, dd);
        if (g == 0) g = 1;
        if (dd / g > INT64_MAX) throw NumericError("ray pair overflow");
        RationalAngle cand(static_cast<std::int64_t>(nn / g),
                           static_cast<std::int64_t>(dd / g));
        if (lo <= cand && cand <= hi) {
          u = cand;
          found = true;
        }
      }
      if (!found) throw ConstructionError("ray pair inversion failed");
    }
    return u;
  };
  return {invert_digits(RationalAngle(5, 6)), invert_digits(RationalAngle(1, 6))};
}

// ---------------------------- siegel descent -------------------------------

// Exact Sturmian digit machinery for the rotation number nu, represented by
// a deep continued-fraction convergent p/q.
struct SturmianCoder {
  std::int64_t p = 1, q = 2;

  explicit SturmianCoder(const ContinuedFraction& nu) {
    auto [pp, qq] = nu.convergent_below(std::int64_t(1) << 50);
    p = pp % qq;
    q = qq;
    if (q < 3) throw PreconditionError("rotation number convergent too shallow");
  }

  // digit_j of T((-k nu)^side): the Sturmian test at m = j - 1 - k.
  int digit(std::int64_t m, bool plus_side) const {
    std::int64_t mm = m % q;
    if (mm < 0) mm += q;
    std::int64_t pos = static_cast<std::int64_t>(
        (static_cast<__int128>(mm) * p) % q);
    if (pos == 0) return plus_side ? 0 : 1;       // boundary at the marked point
    if (pos == q - p) return plus_side ? 1 : 0;   // boundary at 1 - nu
    return pos > q - p ? 1 : 0;
  }

  // compare rational u against T((-k nu)^side): -1 if u smaller, +1 larger.
  int compare(const RationalAngle& u, std::int64_t k, bool plus_side,
              int max_digits = 300) const {
    auto du = u.binary_digits();
    for (int j = 1; j <= max_digits; ++j) {
      int a = du.next();
      int b = digit(j - 1 - k, plus_side);
      if (a != b) return a < b ? -1 : 1;
    }
    throw ConstructionError("angle indistinguishable from a boundary leaf at depth budget");
  }

  bool in_gap(const RationalAngle& u, std::int64_t k) const {
    if (k == 0) {
      // the critical gap wraps through angle 0
      return compare(u, 0, false) > 0 || compare(u, 0, true) < 0;
    }
    return compare(u, k, false) > 0 && compare(u, k, true) < 0;
  }

  // first-entry gap index of u; throws if none found below the cap
  int gap_index(const RationalAngle& u, int kmax = 64) const {
    for (int k = 0; k <= kmax; ++k)
      if (in_gap(u, k)) return k;
    throw ConstructionError("no wake found for angle (coding depth exceeded)");
  }

  // Rational truncation of T((-k nu)^side) to the given number of digits.
  RationalAngle gap_endpoint(std::int64_t k, bool plus_side, int digits = 50) const {
    std::int64_t num = 0;
    for (int j = 1; j <= digits; ++j) num = num * 2 + digit(j - 1 - k, plus_side);
    return RationalAngle(num, std::int64_t(1) << digits);
  }
};

struct SiegelDescent {
  std::vector<int> entries;  // attachment generations, one per chain step
  std::vector<int> gen_increments;
  std::vector<DescentTransform> log;
  RationalAngle final_u;
};

inline SiegelDescent siegel_descend(const SturmianCoder& coder, RationalAngle u0,
                                    int max_entries, int kmax = 64) {
  SiegelDescent out;
  RationalAngle u = u0;
  while (static_cast<int>(out.entries.size()) < max_entries) {
    int k = coder.gap_index(u, kmax);
    out.entries.push_back(k);
    out.gen_increments.push_back(k + 1);
    int f = k + 1;
    __int128 scaled = static_cast<__int128>(u.num) << f;
    std::int64_t m = static_cast<std::int64_t>(scaled / u.den);
    out.log.push_back({f, m});
    u = u.times_pow2(f);
  }
  out.final_u = u;
  return out;
}

// ------------------------------ addresses ----------------------------------

enum class BubbleModel { basilica, siegel };

// Address tuple in the two conventions: dyadic internal angles (basilica) or
// attachment generations (siegel).
struct BubbleAddress {
  BubbleModel model = BubbleModel::basilica;
  std::vector<RationalAngle> angles;  // basilica entries
  std::vector<int> generations;       // siegel entries

  std::size_t size() const {
    return model == BubbleModel::basilica ? angles.size() : generations.size();
  }

  std::string str() const {
    std::ostringstream os;
    os << (model == BubbleModel::basilica ? "basilica:[" : "siegel:[");
    if (model == BubbleModel::basilica) {
      for (std::size_t i = 0; i < angles.size(); ++i)
        os << (i ? "," : "") << angles[i].str();
    } else {
      for (std::size_t i = 0; i < generations.size(); ++i)
        os << (i ? "," : "") << generations[i];
    }
    os << "]";
    return os.str();
  }

  friend bool operator==(const BubbleAddress& a, const BubbleAddress& b) {
    return a.model == b.model && a.angles == b.angles && a.generations == b.generations;
  }
};

}  // namespace smating
