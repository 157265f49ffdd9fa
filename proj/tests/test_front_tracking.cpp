#include "doctest.h"
#include "kinewave/errors.hpp"
#include "kinewave/front_tracking.hpp"
#include "support/scenarios.hpp"

using namespace kinewave;
using namespace kinewave::oracle;
using namespace kinewave::testing;

TEST_SUITE("front-tracking") {
  TEST_CASE("Riemann problem: compressive jump is one shock") {
    const auto f = solve_riemann({500, Regime::Free}, {1500, Regime::Congested}, kI1);
    REQUIRE(f.size() == 1);
    // rho: 500/30 -> 400 - 1500/10.
    CHECK(f[0].speed == doctest::Approx(1000.0 / (250.0 - 500.0 / 30.0)));
  }

  TEST_CASE("Riemann problem: a jam discharging into vacuum opens a fan") {
    const auto f = solve_riemann({0, Regime::Congested}, {0, Regime::Free}, kI1);
    REQUIRE(f.size() == 2);
    CHECK(f[0].speed == doctest::Approx(-kI1.w));
    CHECK(f[1].speed == doctest::Approx(kI1.k));
    CHECK(f[0].right.q == doctest::Approx(kI1.C));
  }

  TEST_CASE("Riemann problem: contacts within one branch") {
    CHECK(solve_riemann({500, Regime::Free}, {500, Regime::Free}, kI1).empty());
    const auto free = solve_riemann({500, Regime::Free}, {1000, Regime::Free}, kI1);
    REQUIRE(free.size() == 1);
    CHECK(free[0].speed == doctest::Approx(kI1.k));
    const auto cong = solve_riemann({2000, Regime::Congested}, {500, Regime::Congested}, kI1);
    REQUIRE(cong.size() == 1);
    CHECK(cong[0].speed == doctest::Approx(-kI1.w));
  }

  TEST_CASE("an empty link stays empty") {
    const auto c = single_link(kI1, StepProfile::constant(0));
    const auto sol = front_track(c.net, c.demand, 2.0);
    CHECK(sol.fronts(0, 1.0).empty());
    CHECK(sol.n_down[0].eval(2.0) == 0.0);
  }

  TEST_CASE("a free front crosses the link in L/k") {
    const auto c = single_link(kI1, StepProfile::constant(1500));
    const auto sol = front_track(c.net, c.demand, 1.0);
    const auto mid = sol.fronts(0, 0.05);
    REQUIRE(mid.size() == 1);
    CHECK(mid[0].position == doctest::Approx(1.5));
    CHECK(sol.n_down[0].eval(0.1) == doctest::Approx(0.0));
    CHECK(sol.n_down[0].eval(0.2) == doctest::Approx(150.0));

    CHECK(sample(sol, 0, 0.05, 1.0).q == doctest::Approx(1500.0));
    CHECK(sample(sol, 0, 0.05, 2.0).q == 0.0);
    CHECK(sample(sol, 0, 0.05, 1.5).q == 0.0);
  }

  TEST_CASE("a closed exit sends a shock upstream") {
    const auto c = single_link(kI1, StepProfile::constant(1500), StepProfile::constant(0));
    const auto sol = front_track(c.net, c.demand, 0.5);
    const auto f = sol.fronts(0, 0.2);
    REQUIRE(f.size() == 1);
    const double speed = -1500.0 / (400.0 - 50.0);
    CHECK(f[0].speed == doctest::Approx(speed));
    CHECK(f[0].position == doctest::Approx(3.0 + 0.1 * speed));
    CHECK(f[0].right.r == Regime::Congested);
  }

  TEST_CASE("a blocked diverge branch backs up into the feeder") {
    const auto c = diverge_case(kI1, kI2, kI2, 0.5, StepProfile::constant(1000), std::nullopt,
                                StepProfile::constant(0));
    const auto sol = front_track(c.net, c.demand, 2.0);
    // The jam on the closed branch reaches the diverge at 0.2 + 3 / (500/(200 - 50/3)).
    const double t_block = 0.2 + 3.0 / (500.0 / (200.0 - 50.0 / 3.0));
    const auto feeder = sol.fronts(0, t_block + 0.2);
    REQUIRE_FALSE(feeder.empty());
    CHECK(feeder.back().speed < 0.0);
    CHECK(feeder.back().right.q == doctest::Approx(0.0));
    CHECK(feeder.back().right.r == Regime::Congested);
    CHECK(sol.n_down[0].eval(t_block + 0.5) == doctest::Approx(sol.n_down[0].eval(t_block)));
    REQUIRE_FALSE(sol.interactions.empty());
  }

  TEST_CASE("mass balance: density integral equals the curve difference") {
    std::vector<Case> cases;
    cases.push_back(single_link(kI1, StepProfile({0.0, 0.7, 1.3}, {2500, 400, 1800}),
                                StepProfile({0.0, 0.9}, {800, 3000})));
    cases.push_back(diverge_case(kI1, kI2, kI4, 0.5, StepProfile({0.0, 1.0}, {2400, 200}),
                                 StepProfile::constant(600), StepProfile::constant(300)));
    cases.push_back(merge_case(kI2, kI4, kI2, 0.5, StepProfile::constant(1200),
                               StepProfile::constant(700), StepProfile({0.0, 1.5}, {900, 0})));
    for (const auto& c : cases) {
      const auto sol = front_track(c.net, c.demand, 3.0);
      for (std::size_t i = 0; i < c.net.link_count(); ++i) {
        for (double t = 0.0; t <= 3.0; t += 0.0625) {
          const double m = link_mass(sol, i, t);
          const double diff = sol.n_up[i].eval(t) - sol.n_down[i].eval(t);
          CHECK(std::abs(m - diff) <= 1e-9 * std::max(1.0, m));
        }
      }
    }
  }

  TEST_CASE("junction throughput moves with the arriving wave") {
    std::vector<Case> cases;
    cases.push_back(diverge_case(kI1, kI2, kI4, 0.5, StepProfile({0.0, 1.0}, {2400, 200}),
                                 StepProfile::constant(600), StepProfile::constant(300)));
    cases.push_back(merge_case(kI2, kI4, kI2, 0.5, StepProfile::constant(1200),
                               StepProfile::constant(700), StepProfile({0.0, 1.5}, {900, 0})));
    std::size_t seen = 0;
    for (const auto& c : cases) {
      const auto sol = front_track(c.net, c.demand, 3.0);
      for (const auto& e : sol.interactions) {
        const double change = e.throughput_after - e.throughput_before;
        CHECK(change * e.wave_flux_jump >= -1e-9 * 3000.0 * 3000.0);
        ++seen;
      }
    }
    CHECK(seen > 0);
  }

  TEST_CASE("event cap") {
    const auto c = single_link(kI1, StepProfile({0.0, 0.7, 1.3}, {2500, 400, 1800}),
                               StepProfile({0.0, 0.9}, {800, 3000}));
    FrontTrackOptions opt;
    opt.event_cap = 3;
    CHECK_THROWS_AS(front_track(c.net, c.demand, 3.0, {}, opt), SimulationError);
  }
}
