#include <cmath>
#include <random>

#include "doctest.h"
#include "projsys/analysis.hpp"
#include "projsys/dynamics.hpp"
#include "test_support.hpp"

using namespace projsys;
using projsys::testing::positive;

namespace {

// Reference values computed with 50-digit arithmetic.
constexpr double kW1 = 5.0506338833465836e-05;
constexpr double kW2 = 1.9799494936611666;
constexpr double kWm = 1.3183144413759736;
constexpr double kPwm = 1.1585686442269635;

double rel(double a, double b) { return relative_difference(a, b); }

/// P(w_m) computed directly from the parameters, without the library.
double p_at_critical(double alpha, double A1, double A2) {
  const double c2 = 2 - A1 - A2 - alpha;
  const double c1 = A1 + A2 - alpha * A1 - alpha * A2 - A1 * A2;
  const double c0 = -alpha * A1 * A2;
  const double w = (2 * c2 + std::sqrt(4 * c2 * c2 + 12 * c1)) / 6;
  return ((-w + c2) * w + c1) * w + c0;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("Example 2 limits at unit parameters") {
    const auto L = example2_limits({1, 1, 1, 1, 1});
    CHECK(rel(L.u, 0.6180339887498949) < 1e-14);
    CHECK(rel(L.v, 1.618033988749895) < 1e-14);
    CHECK(rel(L.x, 0.2360679774997897) < 1e-13);
    CHECK(rel(L.y, 0.6180339887498949) < 1e-14);
    CHECK(rel(L.z, 0.3819660112501052) < 1e-14);
  }

  TEST_CASE("Example 2 limits with beta = 2") {
    const auto L = example2_limits({1, 1, 1, 2, 1});
    CHECK(rel(L.u, 0.70710678118654752) < 1e-14);
    CHECK(rel(L.v, 2.4142135623730950) < 1e-14);
    CHECK(rel(L.x, 0.20710678118654752) < 1e-13);
    CHECK(rel(L.y, 0.70710678118654752) < 1e-14);
    CHECK(rel(L.z, 0.29289321881345248) < 1e-14);
  }

  TEST_CASE("Example 2 identities hold on random parameters") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 500; ++trial) {
      const Example2Params p{positive(rng), positive(rng), positive(rng), positive(rng),
                             positive(rng)};
      const auto L = example2_limits(p);
      CHECK(rel(L.x / L.z, L.u) < 1e-12);
      CHECK(rel(L.y / L.z, L.v) < 1e-12);
      CHECK(rel(L.v, L.u / (p.D * L.z)) < 1e-12);
      CHECK(rel(example2_u_recurrence(p, L.u, L.u), L.u) < 1e-12);
      const State image = step(example2_system(p), State{L.x, L.y, L.z});
      CHECK(rel(image[0], L.x) < 1e-12);
      CHECK(rel(image[1], L.y) < 1e-12);
      CHECK(rel(image[2], L.z) < 1e-12);
    }
  }

  TEST_CASE("Example 2 system shape and parameter checks") {
    const auto spec = example2_system({2, 3, 5, 7, 11});
    CHECK(classify(spec) == ProjectivityClass::Homogeneous);
    const State image = step(spec, State{1, 1, 1});
    CHECK(image[0] == doctest::Approx(1.0 / 5.0));
    CHECK(image[1] == doctest::Approx(1.0 / 5.0));
    CHECK(image[2] == doctest::Approx(1.0 / 18.0));
    CHECK_THROWS_AS(example2_system({0, 1, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(example2_limits({1, 1, -1, 1, 1}), std::invalid_argument);
  }

  TEST_CASE("Example 3 reference instance is bistable") {
    const auto a = example3_analyze({0.01, 0.01, 0.01});
    CHECK(a.regime == Example3Case::Bistable);
    REQUIRE(a.roots);
    CHECK(rel(a.roots->first, kW1) < 1e-13);
    CHECK(rel(a.roots->second, kW2) < 1e-14);
    REQUIRE(a.w_m);
    CHECK(rel(*a.w_m, kWm) < 1e-14);
    CHECK(rel(*a.P_at_wm, kPwm) < 1e-13);
    CHECK(std::abs(evaluate(a.P, a.roots->first)) < 1e-10 * a.scale());
    CHECK(std::abs(evaluate(a.P, a.roots->second)) < 1e-10 * a.scale());
    CHECK(a.D[0] == -3.0);
  }

  TEST_CASE("Example 3 critical point is a root of the derivative") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
      const auto a = example3_analyze({positive(rng, 2), positive(rng, 2), positive(rng, 2)});
      if (!a.w_m) continue;
      const double d = (a.D[0] * *a.w_m + a.D[1]) * *a.w_m + a.D[2];
      CHECK(std::abs(d) < 1e-12 * (std::abs(a.D[0]) + std::abs(a.D[1]) + std::abs(a.D[2])) *
                              std::max(1.0, *a.w_m * *a.w_m));
    }
  }

  TEST_CASE("Example 3 all-ones instance goes extinct") {
    const auto a = example3_analyze({1, 1, 1});
    CHECK(a.regime == Example3Case::Extinction);
    CHECK_FALSE(a.roots);
    CHECK(example3_basin(a, 5.0) == Example3Basin::ToZero);
    const auto L = example3_limits(a, 5.0);
    CHECK(L.x == 0.0);
    CHECK_FALSE(L.z);
  }

  TEST_CASE("Example 3 basins and limits") {
    const auto a = example3_analyze({0.01, 0.01, 0.01});
    const double w1 = a.roots->first;
    CHECK(example3_basin(a, 0.5 * w1) == Example3Basin::ToZero);
    CHECK(example3_basin(a, w1) == Example3Basin::AtW1);
    CHECK(example3_basin(a, 2 * w1) == Example3Basin::ToW2);
    CHECK(example3_basin(a, 100.0) == Example3Basin::ToW2);
    CHECK_THROWS_AS(example3_basin(a, -1.0), std::invalid_argument);

    const auto high = example3_limits(a, 1.0);
    REQUIRE(high.z);
    CHECK(rel(high.x, 0.99497474683058327) < 1e-13);
    CHECK(rel(high.y, 0.99497474683058327) < 1e-13);
    CHECK(rel(*high.z, 1.0050506338833466) < 1e-13);

    const auto boundary = example3_limits(a, w1);
    REQUIRE(boundary.z);
    CHECK(rel(boundary.x, 0.0050252531694167329) < 1e-12);
    CHECK(rel(*boundary.z, 198.99494936611665) < 1e-12);

    const State s = example3_state_on_w1(a);
    CHECK(example3_w(s) == w1);
  }

  TEST_CASE("Example 3 simulated orbits land on the predicted limits") {
    const Example3Params p{0.01, 0.01, 0.01};
    const auto a = example3_analyze(p);
    const auto spec = example3_system(p);

    const auto up = detect_limit(iterate(spec, State{1, 1, 1}, 10000));
    const auto* point = std::get_if<ConvergedPoint>(&up.behavior);
    REQUIRE(point);
    const auto L = example3_limits(a, 2.0);
    CHECK(rel(point->limit[0], L.x) < 1e-6);
    CHECK(rel(point->limit[2], *L.z) < 1e-6);

    const State low{1e-6, 1e-6, 1.0};
    const auto down = iterate(spec, low, 10000);
    const auto report = detect_limit(down);
    const auto* div = std::get_if<DivergentComponent>(&report.behavior);
    REQUIRE(div);
    CHECK(div->to_infinity == std::vector<std::size_t>{2});
  }

  TEST_CASE("scalar reduced map fixes the equilibria") {
    const Example3Params p{0.01, 0.01, 0.01};
    const auto a = example3_analyze(p);
    CHECK(rel(scalar_reduced_map_example3(p, a.roots->second), a.roots->second) < 1e-13);
    CHECK(rel(scalar_reduced_map_example3(p, a.roots->first), a.roots->first) < 1e-10);
    // w along an orbit follows the scalar map
    const auto spec = example3_system(p);
    State x{0.3, 0.7, 2.0};
    for (int n = 0; n < 20; ++n) {
      const State next = step(spec, x);
      CHECK(rel(example3_w(next), scalar_reduced_map_example3(p, example3_w(x))) < 1e-13);
      x = next;
    }
  }

  TEST_CASE("Example 3 root count agrees with the closed-form cubic") {
    std::mt19937_64 rng(43);
    int bistable = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const Example3Params p{positive(rng, 1.5), positive(rng, 1.5), positive(rng, 1.5)};
      const auto a = example3_analyze(p);
      std::vector<double> oracle;
      const int count =
          projsys::testing::cardano_positive_roots(a.P[0], a.P[1], a.P[2], a.P[3], &oracle);
      CHECK((count == 0 || count == 2));
      if (a.regime == Example3Case::Bistable) {
        ++bistable;
        CHECK(count == 2);
        std::sort(oracle.begin(), oracle.end());
        CHECK(rel(a.roots->first, oracle[0]) < 1e-6);
        CHECK(rel(a.roots->second, oracle[1]) < 1e-6);
      } else if (a.regime == Example3Case::Extinction) {
        CHECK(count == 0);
      }
    }
    CHECK(bistable > 50);
  }

  TEST_CASE("Example 3 degenerate boundary is detected") {
    const double A = 0.01;
    double lo = 1.5, hi = 1.75;  // bistable at lo, extinct at hi
    REQUIRE(p_at_critical(lo, A, A) > 0.0);
    REQUIRE(p_at_critical(hi, A, A) < 0.0);
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (p_at_critical(mid, A, A) > 0.0 ? lo : hi) = mid;
    }
    const auto a = example3_analyze({lo, A, A});
    CHECK(a.regime == Example3Case::DegenerateBoundary);
    CHECK_FALSE(a.roots);
    CHECK_THROWS_AS(example3_basin(a, 1.0), NotClassifiable);
    CHECK_THROWS_AS(example3_state_on_w1(a), NotClassifiable);
  }

  TEST_CASE("isolate_positive_roots on known cubics") {
    // -(w - 1)(w - 2)(w - 3)
    const Cubic p{-1, 6, -11, 6};
    const auto roots = isolate_positive_roots(p, 1.0 + cauchy_upper_bound(p));
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(roots[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(roots[2] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(isolate_positive_roots(Cubic{-1, 0, -1, -1}, 10.0).empty());
    CHECK(cauchy_upper_bound(p) == 1.0 + 11.0);
  }

  TEST_CASE("Example 4 limits") {
    const auto L = example4_limits({1, 1, 1, 1, 2});
    CHECK(rel(L.even[0], 1.2360679774997897) < 1e-14);
    CHECK(rel(L.even[1], 1.2360679774997897) < 1e-14);
    CHECK(L.even[2] == 2.0);
    CHECK(rel(L.odd[0], 0.30901699437494742) < 1e-14);
    CHECK(rel(L.odd[1], 0.30901699437494742) < 1e-14);
    CHECK(L.odd[2] == 0.5);

    const auto one = example4_limits({1, 1, 1, 1, 1});
    for (std::size_t i = 0; i < 3; ++i) CHECK(rel(one.even[i], one.odd[i]) < 1e-15);
  }

  TEST_CASE("Example 4 identities on random parameters") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 500; ++trial) {
      const Example4Params p{positive(rng), positive(rng), positive(rng), positive(rng),
                             positive(rng)};
      const auto L = example4_limits(p);
      CHECK(std::abs(L.even[2] * L.odd[2] - 1.0) < 1e-12);
      CHECK(rel(example4_u_recurrence(p, L.u), L.u) < 1e-12);
      CHECK(rel(L.even[0] / L.even[2], L.u) < 1e-12);
      CHECK(rel(L.odd[1] / L.odd[2], L.v) < 1e-12);
      const auto spec = example4_system(p);
      const State odd = step(spec, L.even);
      const State even = step(spec, odd);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rel(odd[i], L.odd[i]) < 1e-12);
        CHECK(rel(even[i], L.even[i]) < 1e-12);
      }
    }
  }
}
