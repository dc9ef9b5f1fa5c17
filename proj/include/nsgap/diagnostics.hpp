#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nsgap/potential.hpp"
#include "nsgap/sampler.hpp"

namespace nsgap {

/// The five probe functions used to approximate the supremum in the
/// IACT-to-gap relation: log pi(x), |x|_1, |x|^2, xi.x and xi.cos(x)
/// (cos applied elementwise). The Gaussian probe vector xi is drawn once per
/// experiment and reused across trials and sweep cells.
struct TestFunctionSuite {
  std::vector<std::string> labels;
  std::vector<std::function<double(const Eigen::VectorXd&)>> functions;
  Eigen::VectorXd probe_xi;

  static Eigen::VectorXd draw_probe(int dim, std::uint64_t seed);
  static TestFunctionSuite standard(const CompositePotential& pot,
                                    const Eigen::VectorXd& probe_xi);
};

/// Biased (1/K-normalized) autocorrelation estimate rho(0..max_lag), computed
/// with the mean-removed lagged-product formula via FFT. The 1/K
/// normalization keeps the sequence positive semidefinite. Requires series
/// length >= 4 max_lag; throws DegenerateSeriesError on a constant series.
std::vector<double> autocorrelation(std::span<const double> series,
                                    int max_lag);

struct IactResult {
  double iact = 1.0;
  int truncation_lag = 0;
  std::vector<double> acf;  // rho(0..truncation_lag)
};

/// Integrated autocorrelation time 1 + 2 sum_{k=1}^T rho(k), with T chosen by
/// Geyer's initial positive sequence rule: lag pairs rho(2j) + rho(2j+1) are
/// accumulated until the first nonpositive pair. The result is clipped below
/// at 1 (reversible chains).
IactResult iact_with_details(std::span<const double> series);
double iact(std::span<const double> series);

/// IACT-based spectral gap estimate for one chain.
struct IactEstimate {
  std::vector<std::string> labels;
  std::vector<double> per_function_iact;
  std::vector<std::vector<double>> per_function_acf;
  std::vector<int> truncation_lags;
  double gap_estimate = 0.0;      // 2 / (1 + max IACT)
  double acceptance_rate = 0.0;   // copied from the chain
};

/// Evaluates the suite along a stationary chain (burn-in already discarded)
/// and returns the max-IACT gap estimate. Constant test-function series are
/// dropped with a warning on stderr; if every function drops, throws
/// DegenerateSeriesError.
IactEstimate estimate_gap(const ChainResult& chain,
                          const TestFunctionSuite& suite);

struct TrialSummary {
  double mean_gap = 0.0;
  double stderr_gap = 0.0;
  double mean_acceptance = 0.0;
  int n_trials = 0;
};

/// Mean and standard error across independent trials. Requires >= 2 inputs.
TrialSummary aggregate_trials(const std::vector<IactEstimate>& estimates);

}  // namespace nsgap
