#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "smating/common.hpp"

namespace smating {

// Continued fraction of x in (0,1): x = 1/(a_1 + 1/(a_2 + ...)).
// Convergents p_n/q_n satisfy q_{n+1} = a_{n+1} q_n + q_{n-1} with the seeds
// q_0 = 1, q_{-1} = 0, and give the closest-return times of the rotation by x.
struct ContinuedFraction {
  std::vector<std::int64_t> a;  // partial quotients a_1..a_N
  std::vector<std::int64_t> p;  // p_1..p_N
  std::vector<std::int64_t> q;  // q_1..q_N
  bool rational_terminated = false;
  bool precision_exhausted = false;

  int depth() const { return static_cast<int>(a.size()); }

  // Value reconstructed from the quotients (rounds to double).
  double value() const {
    double v = 0.0;
    for (int i = depth() - 1; i >= 0; --i) v = 1.0 / (static_cast<double>(a[i]) + v);
    return v;
  }

  // Rational convergent as a pair; n is 1-based.
  std::pair<std::int64_t, std::int64_t> convergent(int n) const {
    if (n < 1 || n > depth()) throw PreconditionError("convergent index out of range");
    return {p[n - 1], q[n - 1]};
  }

  // Highest convergent with q below the given bound; used as an exact
  // rational stand-in for the irrational when integer tests are needed.
  std::pair<std::int64_t, std::int64_t> convergent_below(std::int64_t qmax) const {
    std::int64_t bp = p.empty() ? 0 : p[0], bq = q.empty() ? 1 : q[0];
    for (int i = 0; i < depth(); ++i)
      if (q[i] <= qmax) { bp = p[i]; bq = q[i]; }
    return {bp, bq};
  }

  static ContinuedFraction from_quotients(const std::vector<std::int64_t>& quotients) {
    ContinuedFraction cf;
    std::int64_t pm1 = 1, pm0 = 0;  // p_{-1}, p_0
    std::int64_t qm1 = 0, qm0 = 1;  // q_{-1}, q_0
    for (std::int64_t ai : quotients) {
      if (ai < 1) throw PreconditionError("partial quotients must be positive");
      __int128 pn = static_cast<__int128>(ai) * pm0 + pm1;
      __int128 qn = static_cast<__int128>(ai) * qm0 + qm1;
      if (qn > INT64_MAX / 4) { cf.precision_exhausted = true; break; }
      cf.a.push_back(ai);
      cf.p.push_back(static_cast<std::int64_t>(pn));
      cf.q.push_back(static_cast<std::int64_t>(qn));
      pm1 = pm0; pm0 = static_cast<std::int64_t>(pn);
      qm1 = qm0; qm0 = static_cast<std::int64_t>(qn);
    }
    return cf;
  }

  static ContinuedFraction golden(int n) {
    return from_quotients(std::vector<std::int64_t>(n, 1));
  }
};

// Expansion by the Gauss map with a precision guard: quotients are trusted
// only while the running denominator stays well inside double resolution.
inline ContinuedFraction continued_fraction_expand(double x, int N) {
  if (!(x > 0.0 && x < 1.0)) throw PreconditionError("expand requires x in (0,1)");
  ContinuedFraction cf;
  std::vector<std::int64_t> quotients;
  double y = x;
  std::int64_t qm1 = 0, qm0 = 1;
  for (int i = 0; i < N; ++i) {
    double inv = 1.0 / y;
    auto ai = static_cast<std::int64_t>(std::floor(inv));
    double frac = inv - static_cast<double>(ai);
    // terminating (rational input to working precision)
    if (frac < 1e-12 * inv || ai <= 0) {
      if (ai >= 1) quotients.push_back(ai);
      cf = ContinuedFraction::from_quotients(quotients);
      cf.rational_terminated = true;
      return cf;
    }
    std::int64_t qn = ai * qm0 + qm1;
    // q_n^2 approaching 1/eps: further quotients are numerically meaningless
    if (static_cast<double>(qn) * static_cast<double>(qn) > 1e14) {
      cf = ContinuedFraction::from_quotients(quotients);
      cf.precision_exhausted = true;
      return cf;
    }
    quotients.push_back(ai);
    qm1 = qm0;
    qm0 = qn;
    y = frac;
  }
  ContinuedFraction out = ContinuedFraction::from_quotients(quotients);
  return out;
}

// Bounded type check: all a_i <= B through depth N.
inline bool is_bounded_type(double x, std::int64_t B, int N) {
  ContinuedFraction cf = continued_fraction_expand(x, N);
  if (cf.rational_terminated) return false;
  for (std::int64_t ai : cf.a)
    if (ai > B) return false;
  return true;
}

inline bool is_bounded_type(const ContinuedFraction& cf, std::int64_t B) {
  for (std::int64_t ai : cf.a)
    if (ai > B) return false;
  return !cf.a.empty();
}

}  // namespace smating
