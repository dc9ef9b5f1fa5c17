#include <cmath>
#include <vector>

#include <doctest.h>
#include <Eigen/Dense>

#include "nsgap/diagnostics.hpp"
#include "nsgap/errors.hpp"
#include "nsgap/potential.hpp"
#include "nsgap/rng.hpp"

using namespace nsgap;

namespace {

std::vector<double> iid_gaussian(int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> s(static_cast<std::size_t>(n));
  for (auto& v : s) v = rng.normal();
  return s;
}

// Stationary AR(1): x_{t+1} = phi x_t + e_t, autocorrelation phi^k and
// IACT (1 + phi)/(1 - phi).
std::vector<double> ar1(int n, double phi, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> s(static_cast<std::size_t>(n));
  double x = rng.normal() / std::sqrt(1.0 - phi * phi);
  for (auto& v : s) {
    x = phi * x + rng.normal();
    v = x;
  }
  return s;
}

// Two-state +-1 chain with flip probability p; its spectral gap is 2p.
std::vector<double> two_state_chain(int n, double p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> s(static_cast<std::size_t>(n));
  double state = 1.0;
  for (auto& v : s) {
    if (rng.uniform01() < p) state = -state;
    v = state;
  }
  return s;
}

}  // namespace

TEST_CASE("autocorrelation estimator") {
  SUBCASE("iid noise decorrelates") {
    const auto s = iid_gaussian(100000, 1);
    const auto rho = autocorrelation(s, 50);
    CHECK(rho[0] == 1.0);
    for (int k = 1; k <= 50; ++k) {
      CHECK(std::abs(rho[static_cast<std::size_t>(k)]) <= 0.02);
    }
  }
  SUBCASE("AR(1) matches the analytic decay") {
    const auto s = ar1(100000, 0.5, 2);
    const auto rho = autocorrelation(s, 30);
    for (int k = 0; k <= 20; ++k) {
      CHECK(std::abs(rho[static_cast<std::size_t>(k)] - std::pow(0.5, k)) <=
            0.02);
    }
  }
  SUBCASE("affine rescaling leaves the normalized ACF unchanged") {
    const auto s = ar1(20000, 0.7, 3);
    std::vector<double> scaled(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) scaled[i] = 2.5 * s[i] - 7.0;
    const auto a = autocorrelation(s, 40);
    const auto b = autocorrelation(scaled, 40);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-10));
    }
  }
  SUBCASE("constant series is degenerate") {
    std::vector<double> flat(1000, 3.14);
    CHECK_THROWS_AS(autocorrelation(flat, 10), DegenerateSeriesError);
  }
  SUBCASE("series must cover 4 max_lag") {
    std::vector<double> s = iid_gaussian(100, 4);
    CHECK_THROWS_AS(autocorrelation(s, 26), InvalidInputError);
  }
}

TEST_CASE("integrated autocorrelation time") {
  SUBCASE("iid series has unit IACT") {
    CHECK(iact(iid_gaussian(100000, 5)) == doctest::Approx(1.0).epsilon(0.05));
  }
  SUBCASE("AR(1) phi = 0.5 gives (1+phi)/(1-phi) = 3") {
    CHECK(iact(ar1(100000, 0.5, 6)) == doctest::Approx(3.0).epsilon(0.10));
  }
  SUBCASE("AR(1) phi = 0.9 gives 19") {
    CHECK(iact(ar1(1000000, 0.9, 7)) == doctest::Approx(19.0).epsilon(0.15));
  }
  SUBCASE("clipped below at one") {
    // Strongly antithetic series: rho(1) < 0, Geyer stops immediately.
    std::vector<double> s(10000);
    SplitMix64 rng(8);
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.01 * rng.normal());
    }
    CHECK(iact(s) == 1.0);
  }
}

TEST_CASE("gap estimation over the test-function suite") {
  const CompositePotential pot = make_std_gaussian(2);
  const Eigen::VectorXd xi = TestFunctionSuite::draw_probe(2, 99);
  const TestFunctionSuite suite = TestFunctionSuite::standard(pot, xi);
  REQUIRE(suite.functions.size() == 5);

  SUBCASE("iid exact samples estimate a unit gap") {
    SplitMix64 rng(10);
    ChainResult chain;
    chain.samples.resize(100000, 2);
    for (Eigen::Index i = 0; i < chain.samples.rows(); ++i) {
      chain.samples(i, 0) = rng.normal();
      chain.samples(i, 1) = rng.normal();
    }
    chain.accept_flags.assign(100000, 1);
    const IactEstimate est = estimate_gap(chain, suite);
    CHECK(est.gap_estimate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(est.gap_estimate > 0.0);
    CHECK(est.gap_estimate < 2.0);
    CHECK(est.acceptance_rate == 1.0);
    CHECK(est.per_function_iact.size() == 5);
  }

  SUBCASE("gap estimate is invariant to rescaling a single test function") {
    SplitMix64 rng(11);
    ChainResult chain;
    chain.samples.resize(20000, 2);
    for (Eigen::Index i = 0; i < chain.samples.rows(); ++i) {
      chain.samples(i, 0) = rng.normal();
      chain.samples(i, 1) = rng.normal();
    }
    chain.accept_flags.assign(20000, 1);

    TestFunctionSuite rescaled = suite;
    auto original = suite.functions[2];
    rescaled.functions[2] = [original](const Eigen::VectorXd& x) {
      return -4.0 * original(x) + 11.0;
    };
    const double a = estimate_gap(chain, suite).gap_estimate;
    const double b = estimate_gap(chain, rescaled).gap_estimate;
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
  }

  SUBCASE("all-constant suites are degenerate") {
    ChainResult chain;
    chain.samples = Eigen::MatrixXd::Zero(1000, 2);
    chain.accept_flags.assign(1000, 0);
    TestFunctionSuite flat;
    flat.probe_xi = xi;
    flat.labels = {"flat"};
    flat.functions = {[](const Eigen::VectorXd&) { return 1.0; }};
    CHECK_THROWS_AS(estimate_gap(chain, flat), DegenerateSeriesError);
  }
}

TEST_CASE("two-state chain recovers its known gap") {
  for (double p : {0.1, 0.3}) {
    const auto series = two_state_chain(1000000, p, 12);
    const double gap = 2.0 / (1.0 + iact(series));
    CHECK(gap == doctest::Approx(2.0 * p).epsilon(0.10));
  }
}

TEST_CASE("trial aggregation") {
  auto with_gap = [](double g) {
    IactEstimate e;
    e.gap_estimate = g;
    e.acceptance_rate = 0.5;
    return e;
  };
  SUBCASE("hand arithmetic for two trials") {
    const TrialSummary s =
        aggregate_trials({with_gap(0.1), with_gap(0.3)});
    CHECK(s.mean_gap == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(s.stderr_gap == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.mean_acceptance == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("identical trials have zero spread") {
    const TrialSummary s =
        aggregate_trials({with_gap(0.25), with_gap(0.25), with_gap(0.25)});
    CHECK(s.stderr_gap == 0.0);
  }
  SUBCASE("permutation invariance") {
    const TrialSummary a =
        aggregate_trials({with_gap(0.1), with_gap(0.2), with_gap(0.4)});
    const TrialSummary b =
        aggregate_trials({with_gap(0.4), with_gap(0.1), with_gap(0.2)});
    CHECK(a.mean_gap == doctest::Approx(b.mean_gap).epsilon(1e-14));
    CHECK(a.stderr_gap == doctest::Approx(b.stderr_gap).epsilon(1e-12));
  }
  SUBCASE("fewer than two trials is invalid") {
    CHECK_THROWS_AS(aggregate_trials({with_gap(0.1)}), InvalidInputError);
  }
}
