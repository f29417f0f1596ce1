#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "projsys/analysis.hpp"
#include "projsys/dynamics.hpp"
#include "test_support.hpp"

using namespace projsys;
using projsys::testing::make_spec;

namespace {

Orbit orbit_of(std::vector<State> states) { return Orbit{std::move(states), std::nullopt}; }

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("iterate a Riccati fixed point") {
    const auto orbit = iterate(make_spec({1}, {{1}}, {1}, {{1}}), State{1}, 10);
    CHECK(orbit.states.size() == 11);
    CHECK_FALSE(orbit.breakdown);
    for (const auto& s : orbit.states) CHECK(s == State{1});
  }

  TEST_CASE("iterate rejects bad initial conditions") {
    const auto spec = projsys::testing::homogeneous_example();
    CHECK_THROWS_AS(iterate(spec, State{1, 0}, 5), std::invalid_argument);
    CHECK_THROWS_AS(iterate(spec, State{1}, 5), std::invalid_argument);
    CHECK(iterate(spec, State{1, 1}, 0).states.size() == 1);
  }

  TEST_CASE("Example 3 extinction orbit: z grows, x and y vanish") {
    const auto spec = example3_system({1, 1, 1});
    const auto orbit = iterate(spec, State{1, 1, 1}, 10000);
    for (std::size_t n = 1; n + 1 < orbit.states.size(); ++n) {
      CHECK(orbit.states[n + 1][2] > orbit.states[n][2]);
      CHECK(orbit.states[n + 1][0] < orbit.states[n][0]);
    }
    const State& last = orbit.states.back();
    CHECK(last[0] < 1e-6);
    CHECK(last[1] < 1e-6);
    CHECK(last[2] > 1e6);
    REQUIRE(orbit.breakdown);  // z_n leaves double range

    const auto report = detect_limit(orbit);
    const auto* div = std::get_if<DivergentComponent>(&report.behavior);
    REQUIRE(div);
    CHECK(div->to_infinity == std::vector<std::size_t>{2});
    CHECK(div->to_zero == std::vector<std::size_t>{0, 1});
  }

  TEST_CASE("Example 4 z-orbit alternates exactly") {
    const auto orbit = iterate(example4_system({1, 1, 1, 1, 2}), State{1, 1, 2}, 20);
    for (std::size_t n = 0; n < orbit.states.size(); ++n) {
      CHECK(orbit.states[n][2] == (n % 2 == 0 ? 2.0 : 0.5));
    }
  }

  TEST_CASE("detect_limit on constant and alternating orbits") {
    const auto constant = detect_limit(orbit_of(std::vector<State>(30, State{3.0, 4.0})));
    const auto* point = std::get_if<ConvergedPoint>(&constant.behavior);
    REQUIRE(point);
    CHECK(point->limit == State{3.0, 4.0});
    CHECK(constant.steps_used == 29);

    std::vector<State> alternating;
    for (int n = 0; n < 31; ++n) alternating.push_back(State{n % 2 == 0 ? 2.0 : 0.5});
    const auto report = detect_limit(orbit_of(alternating));
    const auto* p2 = std::get_if<ConvergedPeriod2>(&report.behavior);
    REQUIRE(p2);
    CHECK(p2->even == State{2.0});
    CHECK(p2->odd == State{0.5});
  }

  TEST_CASE("detect_limit outcomes: undecided, divergence, short orbits") {
    std::vector<State> ramp;
    for (int n = 0; n < 40; ++n) ramp.push_back(State{1.0 + n});
    CHECK(std::holds_alternative<Undecided>(detect_limit(orbit_of(ramp)).behavior));

    std::vector<State> blowup;
    for (int n = 0; n < 40; ++n) blowup.push_back(State{std::pow(10.0, 8.0 * n), std::pow(10.0, -8.0 * n)});
    const auto report = detect_limit(orbit_of(blowup));
    const auto* div = std::get_if<DivergentComponent>(&report.behavior);
    REQUIRE(div);
    CHECK(div->to_infinity == std::vector<std::size_t>{0});
    CHECK(div->to_zero == std::vector<std::size_t>{1});

    CHECK_THROWS_AS(detect_limit(orbit_of(std::vector<State>(5, State{1.0}))), InsufficientData);
  }

  TEST_CASE("equal even and odd limits collapse to a point") {
    std::vector<State> states;
    for (int n = 0; n < 30; ++n) states.push_back(State{1.0 + (n % 2) * 1e-13});
    const auto report = detect_limit(orbit_of(states));
    CHECK(std::holds_alternative<ConvergedPoint>(report.behavior));
  }

  TEST_CASE("converged limits are fixed points; period-2 limits are 2-cycles") {
    std::mt19937_64 rng(31);
    const double tol = 1e-10;
    for (int trial = 0; trial < 50; ++trial) {
      const Example2Params p{projsys::testing::positive(rng), projsys::testing::positive(rng),
                             projsys::testing::positive(rng), projsys::testing::positive(rng),
                             projsys::testing::positive(rng)};
      const auto spec = example2_system(p);
      const auto orbit = iterate(spec, projsys::testing::random_state(rng, 3), 20000);
      const auto report = detect_limit(orbit, tol);
      const auto* point = std::get_if<ConvergedPoint>(&report.behavior);
      REQUIRE(point);
      const State image = step(spec, point->limit);
      for (std::size_t i = 0; i < 3; ++i) CHECK(relative_difference(image[i], point->limit[i]) < 10 * tol);
    }
    for (int trial = 0; trial < 50; ++trial) {
      const Example4Params p{projsys::testing::positive(rng), projsys::testing::positive(rng),
                             projsys::testing::positive(rng), projsys::testing::positive(rng),
                             projsys::testing::positive(rng)};
      const auto spec = example4_system(p);
      State x0 = projsys::testing::random_state(rng, 3);
      x0[2] = p.z0;
      const auto orbit = iterate(spec, x0, 10000);
      for (std::size_t n = 0; n + 1 < orbit.states.size(); n += 2) {
        CHECK(std::abs(orbit.states[n][2] * orbit.states[n + 1][2] - 1.0) < 1e-12);
      }
      const auto report = detect_limit(orbit, tol);
      const auto* p2 = std::get_if<ConvergedPeriod2>(&report.behavior);
      REQUIRE(p2);
      const State to_odd = step(spec, p2->even);
      const State back = step(spec, to_odd);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(relative_difference(to_odd[i], p2->odd[i]) < 10 * tol);
        CHECK(relative_difference(back[i], p2->even[i]) < 10 * tol);
      }
    }
  }

  TEST_CASE("check_conjugacy passes on random systems and fails on a corrupted reduction") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 100; ++trial) {
      const auto spec = projsys::testing::random_spec(ProjectivityClass::Homogeneous, 2, rng);
      const auto report = check_conjugacy(spec, projsys::testing::random_state(rng, 2), 2, 100, 1e-9);
      CHECK(report.passed);
      CHECK(report.steps_compared == 101);
    }
    for (int trial = 0; trial < 50; ++trial) {
      const Example2Params p{projsys::testing::positive(rng), projsys::testing::positive(rng),
                             projsys::testing::positive(rng), projsys::testing::positive(rng),
                             projsys::testing::positive(rng)};
      CHECK(check_conjugacy(example2_system(p), projsys::testing::random_state(rng, 3), 3, 200, 1e-9)
                .passed);
    }
    const auto spec = example2_system({1, 1, 1, 1, 1});
    auto corrupted = reduce(spec, 3);
    corrupted.components[0].den_a.c += 1e-3;
    const auto bad = check_conjugacy(spec, corrupted, State{1, 2, 3}, 200, 1e-9);
    CHECK_FALSE(bad.passed);
    CHECK(bad.max_deviation > 1e-6);
  }

  TEST_CASE("orbit CSV layout") {
    Orbit orbit{{State{1.0, 0.1}, State{2.0, 1.0 / 3.0}}, Breakdown{2, BreakdownCause::Overflow, 0}};
    std::ostringstream os;
    write_orbit_csv(os, orbit);
    CHECK(os.str() ==
          "n,x1,x2\n"
          "0,1,0.10000000000000001\n"
          "1,2,0.33333333333333331\n"
          "# breakdown at n=2, cause=Overflow\n");
  }

  TEST_CASE("reduced systems iterate and break down like originals") {
    const auto red = reduce(example4_system({1, 1, 1, 1, 1}), 3);
    const auto orbit = iterate(red, State{1, 1}, 100);
    const auto report = detect_limit(orbit);
    const auto* point = std::get_if<ConvergedPoint>(&report.behavior);
    REQUIRE(point);
    const double u = (std::sqrt(5.0) - 1.0) / 2.0;
    CHECK(point->limit[0] == doctest::Approx(u).epsilon(1e-10));
  }
}
