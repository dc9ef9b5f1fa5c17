#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <doctest.h>

#include "nsgap/errors.hpp"
#include "nsgap/rng.hpp"
#include "nsgap/theory.hpp"

using namespace nsgap;

namespace {
constexpr double kPi = std::numbers::pi;

bool close_rel(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace

TEST_CASE("rwm step-size ceiling") {
  CHECK(close_rel(rwm_max_step(100, 4.0, 0.0), 0.025));
  CHECK(close_rel(rwm_max_step(10, 1.0, 1.0), 1.0 / (16.0 * std::sqrt(10.0))));
  CHECK(rwm_max_step(1, 0.0, 0.0) ==
        std::numeric_limits<double>::infinity());
  CHECK(close_rel(rwm_max_step(4, 0.0, 2.0), 1.0 / 64.0));

  SplitMix64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + static_cast<int>(rng.next() % 50);
    const double m_const = std::exp(rng.normal());
    const double l_const = std::exp(rng.normal());
    const double base = rwm_max_step(d, m_const, l_const);
    CHECK(rwm_max_step(d + 1, m_const, l_const) <= base);
    CHECK(rwm_max_step(d, 2.0 * m_const, l_const) <= base);
    CHECK(rwm_max_step(d, m_const, 2.0 * l_const) <= base);
  }
}

TEST_CASE("mala step-size ceiling") {
  CHECK(close_rel(mala_max_step(10, 1.0, 1.0, 0.0), 5e-4));
  CHECK(close_rel(mala_max_step(10, 1.0, 0.1, 1.0), 5e-5));
  CHECK_THROWS_AS(mala_max_step(10, 1.0, 0.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(mala_max_step(10, 1.0, 2.0, 1.0), InvalidInputError);

  SplitMix64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + static_cast<int>(rng.next() % 50);
    const double m_const = std::exp(rng.normal());
    const double big_m = m_const * (1.0 + std::abs(rng.normal()));
    const double l_const = std::exp(rng.normal());
    const double base = mala_max_step(d, big_m, m_const, l_const);
    CHECK(mala_max_step(d + 1, big_m, m_const, l_const) <= base);
    CHECK(mala_max_step(d, 2.0 * big_m, m_const, l_const) <= base);
    CHECK(mala_max_step(d, big_m, m_const, 2.0 * l_const) <= base);
    CHECK(mala_max_step(d, 2.0 * big_m, 2.0 * m_const, l_const) >=
          mala_max_step(d, 2.0 * big_m, m_const, l_const));
  }
}

TEST_CASE("rwm gap bound constants") {
  SUBCASE("convex value") {
    const BoundReport r =
        rwm_gap_bound(IsoProfile::convex(1.0), 0.01, 1, 1.0, 0.0);
    CHECK(close_rel(r.gap_lower, 1e-4 / (8192.0 * kPi)));
    CHECK(r.gap_lower == doctest::Approx(3.8856e-9).epsilon(1e-4));
    CHECK(r.epsilon == 0.25);
    CHECK(r.delta == 0.01 / 4.0);
  }
  SUBCASE("lsi and poincare values") {
    const double h = 0.005;
    const double h4 = h * h * h * h;
    const BoundReport lsi =
        rwm_gap_bound(IsoProfile::lsi(2.0), h, 1, 1.0, 0.0);
    CHECK(close_rel(lsi.gap_lower, std::exp2(-20.0) * h4 / (4.0 + h4)));
    const BoundReport pi =
        rwm_gap_bound(IsoProfile::poincare(2.0), h, 1, 1.0, 0.0);
    const double c2 = std::log(8.0) * std::log(8.0) * std::exp2(-23.0);
    CHECK(close_rel(pi.gap_lower, c2 * h4 / (4.0 + h4)));
  }
  SUBCASE("lsi limits") {
    const double h = 0.01;
    const double tiny =
        rwm_gap_bound(IsoProfile::lsi(1e6), h, 1, 1.0, 0.0).gap_lower;
    CHECK(tiny < 1e-25);
    const double saturated =
        rwm_gap_bound(IsoProfile::lsi(1e-12), h, 1, 1.0, 0.0).gap_lower;
    CHECK(close_rel(saturated, std::exp2(-20.0), 1e-6));
  }
  SUBCASE("inadmissible h names the binding term") {
    try {
      rwm_gap_bound(IsoProfile::convex(0.5), 1.0, 10, 1.0, 1.0);
      FAIL("expected ConstraintViolationError");
    } catch (const ConstraintViolationError& e) {
      CHECK(std::string(e.what()).find("lipschitz") != std::string::npos);
    }
    try {
      rwm_gap_bound(IsoProfile::convex(0.5), 1.0, 10, 1.0, 0.0);
      FAIL("expected ConstraintViolationError");
    } catch (const ConstraintViolationError& e) {
      CHECK(std::string(e.what()).find("smoothness") != std::string::npos);
    }
  }
}

TEST_CASE("mala gap bound") {
  SUBCASE("value and linearity") {
    const BoundReport r = mala_gap_bound(1.0, 1e-4, 1, 1.0, 0.0, true);
    CHECK(close_rel(r.gap_lower, 1e-4 / (40000.0 * kPi)));
    CHECK(r.gap_lower == doctest::Approx(7.9577e-10).epsilon(1e-4));
    CHECK(r.epsilon == 0.2);
    CHECK(close_rel(r.delta, std::sqrt(2e-4) / 10.0));

    const BoundReport r2 = mala_gap_bound(1.0, 2e-4, 1, 1.0, 0.0, true);
    CHECK(close_rel(r2.gap_lower, 2.0 * r.gap_lower));
    const BoundReport rm = mala_gap_bound(0.5, 1e-4, 1, 1.0, 0.0, true);
    CHECK(close_rel(rm.gap_lower, 0.5 * r.gap_lower));
  }
  SUBCASE("assumption violations") {
    CHECK_THROWS_AS(mala_gap_bound(0.0, 1e-4, 1, 1.0, 0.0, true),
                    AssumptionViolationError);
    CHECK_THROWS_AS(mala_gap_bound(1.0, 1e-4, 1, 1.0, 0.0, false),
                    AssumptionViolationError);
  }
  SUBCASE("inadmissible h") {
    CHECK_THROWS_AS(mala_gap_bound(1.0, 1.0, 10, 1.0, 1.0, true),
                    ConstraintViolationError);
  }
}

TEST_CASE("rwm rejection bound") {
  CHECK(close_rel(rwm_rejection_bound(10, 0.0, 0.0, 5.0), 0.5));
  CHECK(close_rel(rwm_rejection_bound(10, 1.0, 1.0, 0.01),
                  0.5 + 0.01 * std::sqrt(10.0) + 0.25 * 1e-4 * 10.0));
  CHECK(rwm_rejection_bound(10, 1.0, 1.0, 0.01) ==
        doctest::Approx(0.53188).epsilon(1e-4));

  SUBCASE("at the step ceiling the bound is at most 5/8") {
    SplitMix64 rng(3);
    for (int k = 0; k < 100; ++k) {
      const int d = 1 + static_cast<int>(rng.next() % 100);
      const double m_const = std::exp(2.0 * rng.normal());
      const double l_const = std::exp(2.0 * rng.normal());
      const double h = rwm_max_step(d, m_const, l_const);
      CHECK(rwm_rejection_bound(d, m_const, l_const, h) <= 0.625 + 1e-12);
    }
  }
  SUBCASE("clipped at one") {
    CHECK(rwm_rejection_bound(10, 1.0, 1.0, 100.0) == 1.0);
  }
}

TEST_CASE("mala acceptance floor") {
  CHECK(mala_acceptance_floor() == 0.65);
  // Both proof branches cap the rejection rate at 0.35.
  CHECK(close_rel(1.0 - mala_acceptance_floor(), 0.35));
}

TEST_CASE("cheeger interval") {
  const auto [lo1, hi1] = cheeger_interval(1.0, 1.0);
  CHECK(lo1 == 0.5);
  CHECK(hi1 == 1.0);
  const auto [lo2, hi2] = cheeger_interval(0.1, 1.0);
  CHECK(close_rel(lo2, 0.005));
  CHECK(hi2 == 0.1);

  SplitMix64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const double kappa = 1.0 + 3.0 * rng.uniform01();
    const double phi = rng.uniform01();
    const auto [lo, hi] = cheeger_interval(phi, kappa);
    if (phi <= 2.0 / kappa) CHECK(lo <= hi);
  }
}

TEST_CASE("isoperimetric profiles") {
  SUBCASE("convex F at 1/4") {
    const IsoProfile p = IsoProfile::convex(1.0);
    CHECK(close_rel(p.F(0.25), 0.25 * std::sqrt(4.0 / kPi)));
    CHECK(p.F(0.25) == doctest::Approx(0.28209).epsilon(1e-4));
  }
  SUBCASE("F increases on (0, 1/2]") {
    for (const IsoProfile& p : {IsoProfile::convex(0.7), IsoProfile::lsi(2.0),
                                IsoProfile::poincare(3.0)}) {
      double prev = 0.0;
      for (int i = 1; i <= 1000; ++i) {
        const double t = 0.5 * static_cast<double>(i) / 1000.0;
        const double v = p.F(t);
        CHECK(v > prev);
        prev = v;
      }
    }
  }
  SUBCASE("midpoint concavity in the convex and Poincare regimes") {
    for (const IsoProfile& p :
         {IsoProfile::convex(2.0), IsoProfile::poincare(1.5)}) {
      SplitMix64 rng(5);
      for (int k = 0; k < 1000; ++k) {
        const double a = 0.5 * rng.uniform01();
        const double b = 0.5 * rng.uniform01();
        if (a <= 0.0 || b <= 0.0) continue;
        CHECK(p.F(0.5 * (a + b)) >= 0.5 * (p.F(a) + p.F(b)) - 1e-12);
      }
    }
  }
  SUBCASE("upsilon forms") {
    const double delta = 0.3;
    CHECK(IsoProfile::convex(1.0).upsilon(delta) == delta);
    CHECK(close_rel(IsoProfile::lsi(2.0).upsilon(delta),
                    0.09 / (2.0 + (1.0 + 1.0 / std::numbers::e) * 0.09)));
    CHECK(close_rel(IsoProfile::poincare(2.0).upsilon(delta),
                    0.09 / (16.0 * (2.0 + 4.0 * 0.09))));
  }
}

TEST_CASE("general isoperimetric gap bound") {
  SUBCASE("reproduces the simplified convex bound at the paper's coupling "
          "parameters") {
    SplitMix64 rng(6);
    for (int k = 0; k < 20; ++k) {
      const double m_const = std::exp(rng.normal());
      const double big_m = m_const * (1.0 + std::abs(rng.normal()));
      const int d = 1 + static_cast<int>(rng.next() % 20);
      const double h = rng.uniform01() * rwm_max_step(d, big_m, 0.0);
      const GapLowerBound g =
          gap_lower_bound_general(0.25, h / 4.0, IsoProfile::convex(m_const));
      const double expected =
          (1.0 / 128.0) *
          std::min(0.25, m_const * h * h / (64.0 * kPi));
      CHECK(close_rel(g.simplified, expected, 1e-12));
      CHECK(close_rel(g.simplified, m_const * h * h / (8192.0 * kPi), 1e-12));
    }
  }
  SUBCASE("the grid supremum dominates the simplified value") {
    SplitMix64 rng(7);
    for (int k = 0; k < 20; ++k) {
      const double c = std::exp(rng.normal());
      const double delta = 0.01 + rng.uniform01();
      for (const IsoProfile& p : {IsoProfile::convex(c), IsoProfile::lsi(c),
                                  IsoProfile::poincare(c)}) {
        const GapLowerBound g = gap_lower_bound_general(0.25, delta, p);
        CHECK(g.grid_value >= g.simplified - 1e-15);
      }
    }
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(
        gap_lower_bound_general(0.0, 0.1, IsoProfile::convex(1.0)),
        InvalidInputError);
    CHECK_THROWS_AS(
        gap_lower_bound_general(0.25, 0.0, IsoProfile::convex(1.0)),
        InvalidInputError);
  }
}

TEST_CASE("bounds vanish with the step size") {
  const double h = 1e-10;
  CHECK(rwm_gap_bound(IsoProfile::convex(1.0), h, 1, 1.0, 0.0).gap_lower <
        1e-18);
  CHECK(rwm_gap_bound(IsoProfile::lsi(1.0), h, 1, 1.0, 0.0).gap_lower <
        1e-18);
  CHECK(rwm_gap_bound(IsoProfile::poincare(1.0), h, 1, 1.0, 0.0).gap_lower <
        1e-18);
  CHECK(mala_gap_bound(1.0, 1e-12, 1, 1.0, 0.0, true).gap_lower < 1e-14);
}
