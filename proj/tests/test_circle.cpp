#include <catch2/catch_amalgamated.hpp>

#include "smating/continued_fraction.hpp"
#include "smating/circle_map.hpp"
#include "smating/dynamical_partition.hpp"

using namespace smating;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
}

TEST_CASE("golden mean expansion is all ones with Fibonacci denominators") {
  auto cf = continued_fraction_expand(kGolden, 6);
  REQUIRE(cf.depth() == 6);
  std::vector<std::int64_t> q_expect{1, 2, 3, 5, 8, 13};
  for (int i = 0; i < 6; ++i) {
    CHECK(cf.a[static_cast<std::size_t>(i)] == 1);
    CHECK(cf.q[static_cast<std::size_t>(i)] == q_expect[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("recurrence q_{n+1} = a_{n+1} q_n + q_{n-1} holds exactly") {
  auto check = [](const ContinuedFraction& cf) {
    for (int n = 2; n < cf.depth(); ++n) {
      CHECK(cf.q[static_cast<std::size_t>(n)] ==
            cf.a[static_cast<std::size_t>(n)] * cf.q[static_cast<std::size_t>(n - 1)] +
                cf.q[static_cast<std::size_t>(n - 2)]);
      CHECK(cf.p[static_cast<std::size_t>(n)] ==
            cf.a[static_cast<std::size_t>(n)] * cf.p[static_cast<std::size_t>(n - 1)] +
                cf.p[static_cast<std::size_t>(n - 2)]);
    }
  };
  check(continued_fraction_expand(kGolden, 20));
  check(continued_fraction_expand(std::sqrt(2.0) - 1.0, 12));
  check(continued_fraction_expand(std::exp(1.0) - 2.0, 12));
}

TEST_CASE("convergents approximate to 1/(q_n q_{n+1})") {
  double xs[] = {kGolden, std::sqrt(2.0) - 1.0, std::exp(1.0) - 2.0, 0.123456789};
  for (double x : xs) {
    auto cf = continued_fraction_expand(x, 12);
    for (int n = 1; n + 1 <= cf.depth(); ++n) {
      auto [pn, qn] = cf.convergent(n);
      auto [pn1, qn1] = cf.convergent(n + 1);
      (void)pn1;
      double err = std::abs(x - static_cast<double>(pn) / static_cast<double>(qn));
      CHECK(err < 1.0 / (static_cast<double>(qn) * static_cast<double>(qn1)) + 1e-15);
      CHECK(err < 1.0 / (static_cast<double>(qn) * static_cast<double>(qn)) + 1e-15);
    }
  }
}

TEST_CASE("rational input terminates with a flag") {
  auto cf = continued_fraction_expand(1.0 / 3.0, 8);
  CHECK(cf.rational_terminated);
  REQUIRE(cf.depth() == 1);
  CHECK(cf.a[0] == 3);
}

TEST_CASE("sqrt(2)-1 expands to all twos") {
  auto cf = continued_fraction_expand(std::sqrt(2.0) - 1.0, 5);
  REQUIRE(cf.depth() == 5);
  for (auto ai : cf.a) CHECK(ai == 2);
  auto [p5, q5] = cf.convergent(5);
  double err = std::abs((std::sqrt(2.0) - 1.0) - static_cast<double>(p5) / static_cast<double>(q5));
  CHECK(err < 1.0 / (static_cast<double>(q5) * static_cast<double>(q5)));
}

TEST_CASE("bounded type classification") {
  CHECK(is_bounded_type(kGolden, 1, 30));
  CHECK_FALSE(is_bounded_type(std::sqrt(2.0) - 1.0, 1, 10));
  CHECK_FALSE(is_bounded_type(std::exp(1.0) - 2.0, 3, 10));
  CHECK(is_bounded_type(std::sqrt(2.0) - 1.0, 2, 10));
}

TEST_CASE("rotation number of a rigid rotation is exact") {
  auto h = CircleMapHandle::rigid_rotation(kGolden);
  auto est = rotation_number(h, 20000);
  CHECK(std::abs(est.value - kGolden) < 1e-12);
  // closest returns are the Fibonacci numbers
  std::vector<std::int64_t> fib{1, 2, 3, 5, 8, 13, 21, 34, 55, 89};
  REQUIRE(est.closest_return_times.size() >= fib.size());
  for (std::size_t i = 0; i < fib.size(); ++i)
    CHECK(est.closest_return_times[i] == fib[i]);
}

TEST_CASE("closest-return property of the rigid golden rotation") {
  auto h = CircleMapHandle::rigid_rotation(kGolden);
  auto est = rotation_number(h, 5000);
  // |F^{q_n}(c) - c| < |F^m(c) - c| for all 0 < m < q_n, n <= 6
  std::vector<double> dist;
  double x = 0.0;
  for (int m = 1; m <= 1000; ++m) {
    x = h.angle_map(x);
    dist.push_back(std::abs(circle_diff(x, 0.0)));
  }
  for (std::size_t n = 0; n < 6; ++n) {
    std::int64_t qn = est.closest_return_times[n];
    for (std::int64_t m = 1; m < qn; ++m)
      CHECK(dist[static_cast<std::size_t>(qn - 1)] < dist[static_cast<std::size_t>(m - 1)]);
  }
}

TEST_CASE("rotation number is invariant under rotation conjugacy") {
  auto h = CircleMapHandle::rigid_rotation(0.3137);
  auto hc = h.conjugated_by_rotation(0.77);
  auto e1 = rotation_number(h, 4000);
  auto e2 = rotation_number(hc, 4000);
  CHECK(std::abs(e1.value - e2.value) < 2.0 * (e1.error_bound + e2.error_bound) + 1e-12);
}

TEST_CASE("dynamical partition of the rigid golden rotation") {
  auto h = CircleMapHandle::rigid_rotation(kGolden);
  auto p2 = dynamical_partition(h, 2, 100000);
  CHECK(p2.atoms.size() == 5);  // q_3 + q_2 = 3 + 2
  CHECK(p2.q_n == 2);
  CHECK(p2.q_n1 == 3);
  auto p4 = dynamical_partition(h, 4, 100000);
  CHECK(p4.atoms.size() == 13);  // q_5 + q_4 = 8 + 5
  CHECK(partition_coverage_residual(p2) < 1e-9);
  CHECK(partition_coverage_residual(p4) < 1e-9);
}

TEST_CASE("adjacent atoms of the golden partition are phi^2-commensurate") {
  auto h = CircleMapHandle::rigid_rotation(kGolden);
  double bound = 2.62;  // golden ratio squared, plus slack
  for (int n = 1; n <= 6; ++n) {
    auto part = dynamical_partition(h, n, 200000);
    CHECK(real_bounds_ratio(part) < bound);
  }
}

TEST_CASE("partitions are nested") {
  auto h = CircleMapHandle::rigid_rotation(kGolden);
  for (int n = 1; n <= 4; ++n) {
    auto coarse = dynamical_partition(h, n, 100000);
    auto fine = dynamical_partition(h, n + 1, 100000);
    for (const auto& atom : fine.atoms) {
      bool inside = false;
      for (const auto& big : coarse.atoms) {
        double ds = frac(atom.start - big.start);
        if (ds <= big.length + 1e-9 && ds + atom.length <= big.length + 1e-9) {
          inside = true;
          break;
        }
      }
      CHECK(inside);
    }
  }
}

TEST_CASE("rational rotation is rejected for partitions") {
  auto h = CircleMapHandle::rigid_rotation(0.5);
  CHECK_THROWS_AS(dynamical_partition(h, 2, 20000), RegimeError);
}
