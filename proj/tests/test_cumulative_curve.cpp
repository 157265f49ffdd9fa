#include <random>

#include "doctest.h"
#include "kinewave/cumulative_curve.hpp"
#include "kinewave/errors.hpp"

using namespace kinewave;

TEST_SUITE("cumulative-curve") {
  TEST_CASE("evaluation") {
    const CumulativeCurve empty(3000.0);
    CHECK(empty.eval(-0.5) == 0.0);
    CHECK(empty.eval(3.0) == 0.0);

    const CumulativeCurve c(3000.0, {0.0, 1.0}, {0.0, 100.0});
    CHECK(c.eval(0.5) == doctest::Approx(50.0));
    CHECK(c.eval(-1.0) == 0.0);
    CHECK(c.eval(2.0) == 100.0);
    CHECK_THROWS_AS(c.eval_strict(1.5), SimulationError);
    CHECK(c.eval_strict(1.0) == 100.0);
  }

  TEST_CASE("append") {
    CumulativeCurve c(3000.0);
    c.append(0.05, 0.0);
    CHECK(c.last_count() == 0.0);
    c.append(0.1, 3000.0);
    CHECK(c.last_count() == doctest::Approx(150.0));
    CHECK_THROWS_AS(c.append(0.15, 3001.0), ValidationError);
    CHECK_THROWS_AS(c.append(0.1, 10.0), ValidationError);
    CHECK_THROWS_AS(c.append(0.2, -1.0), ValidationError);

    CumulativeCurve d(1500.0);
    for (int n = 1; n <= 40; ++n) d.append(0.05 * n, 1500.0);
    CHECK(d.eval(2.0) == doctest::Approx(3000.0));
  }

  TEST_CASE("constructor checks") {
    CHECK_THROWS_AS(CumulativeCurve(100.0, {0.0, 1.0}, {5.0, 10.0}), ValidationError);
    CHECK_THROWS_AS(CumulativeCurve(100.0, {0.0, 1.0}, {0.0, 101.0}), ValidationError);
    CHECK_THROWS_AS(CumulativeCurve(100.0, {0.0, 1.0, 2.0}, {0.0, 50.0, 40.0}), ValidationError);
    CHECK_THROWS_AS(CumulativeCurve(100.0, {0.0, 0.0}, {0.0, 0.0}), ValidationError);
  }

  TEST_CASE("random curves are monotone and Lipschitz") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      CumulativeCurve c(750.0);
      double t = 0.0;
      for (int n = 0; n < 60; ++n) {
        t += 0.01 + 0.1 * u(gen);
        const double rate = 750.0 * u(gen);
        const double before = c.last_count();
        c.append(t, rate);
        CHECK(std::abs(c.eval(t) - (before + rate * (t - c.times()[c.size() - 2]))) <= 1e-12 * (1.0 + before));
      }
      for (int k = 0; k < 200; ++k) {
        const double a = t * u(gen);
        const double h = 0.5 * u(gen);
        CHECK(c.eval(a + h) >= c.eval(a));
        CHECK(c.eval(a + h) - c.eval(a) <= 750.0 * h + 1e-9);
      }
    }
  }

  TEST_CASE("vehicles on link and sup distance") {
    CumulativeCurve up(3000.0), down(3000.0);
    for (int n = 1; n <= 20; ++n) {
      up.append(0.05 * n, 3000.0);
      down.append(0.05 * n, 0.0);
    }
    CHECK(vehicles_on_link(up, up, 1.0) == 0.0);
    CHECK(vehicles_on_link(up, down, 1.0) == doctest::Approx(3000.0));

    const CumulativeCurve a(100.0, {0.0, 1.0, 2.0}, {0.0, 50.0, 50.0});
    const CumulativeCurve b(100.0, {0.0, 0.5, 2.0}, {0.0, 0.0, 60.0});
    // The gap peaks at t = 1: 50 vs 20.
    CHECK(sup_distance(a, b, 0.0, 2.0) == doctest::Approx(30.0));
    CHECK(sup_distance(a, b, 0.0, 0.5) == doctest::Approx(25.0));
  }
}
