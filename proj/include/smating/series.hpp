#pragma once

#include <array>

#include "smating/complex_sphere.hpp"

namespace smating {

// Truncated power series at 0, order < N. Enough arithmetic for the local
// normal-form computations; all operations drop terms of order >= N.
template <int N = 8>
struct Series {
  std::array<Complex, N> c{};

  static Series identity() {
    Series s;
    s.c[1] = Complex(1, 0);
    return s;
  }

  Series operator+(const Series& o) const {
    Series r;
    for (int i = 0; i < N; ++i) r.c[i] = c[i] + o.c[i];
    return r;
  }

  Series operator*(const Series& o) const {
    Series r;
    for (int i = 0; i < N; ++i)
      for (int j = 0; i + j < N; ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
  }

  Series scaled(Complex k) const {
    Series r;
    for (int i = 0; i < N; ++i) r.c[i] = k * c[i];
    return r;
  }

  // this(o(z)) for o with o(0) = 0.
  Series compose(const Series& o) const {
    Series r;
    r.c[0] = c[0];
    Series p = Series::one();
    for (int k = 1; k < N; ++k) {
      p = p * o;
      for (int i = 0; i < N; ++i) r.c[i] += c[k] * p.c[i];
    }
    return r;
  }

  // Compositional inverse of a series with c0 = 0, c1 != 0: series g with
  // g(this(z)) = z, computed order by order.
  Series inverse() const {
    Series g;
    g.c[1] = 1.0 / c[1];
    for (int n = 2; n < N; ++n) {
      // impose [z^n] g(f(z)) = 0
      Series gf = g.compose(*this);
      g.c[n] -= gf.c[n] / std::pow(c[1], n);
    }
    return g;
  }

  static Series one() {
    Series s;
    s.c[0] = Complex(1, 0);
    return s;
  }

  // 1/(1 - k z) truncated.
  static Series geometric(Complex k) {
    Series s;
    Complex p(1, 0);
    for (int i = 0; i < N; ++i) {
      s.c[i] = p;
      p *= k;
    }
    return s;
  }
};

}  // namespace smating
