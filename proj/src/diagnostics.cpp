#include "nsgap/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>

#include <unsupported/Eigen/FFT>

#include "nsgap/errors.hpp"
#include "nsgap/rng.hpp"

namespace nsgap {

Eigen::VectorXd TestFunctionSuite::draw_probe(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return rng.normal_vector(dim);
}

TestFunctionSuite TestFunctionSuite::standard(const CompositePotential& pot,
                                              const Eigen::VectorXd& probe_xi) {
  if (probe_xi.size() != pot.dim) {
    throw InvalidInputError("TestFunctionSuite: probe dimension mismatch");
  }
  TestFunctionSuite suite;
  suite.probe_xi = probe_xi;
  suite.labels = {"log_pi", "l1_norm", "sq_norm", "xi_dot_x", "xi_dot_cos_x"};
  auto log_density = pot.log_density;
  const Eigen::VectorXd xi = probe_xi;
  suite.functions = {
      [log_density](const Eigen::VectorXd& x) { return log_density(x); },
      [](const Eigen::VectorXd& x) { return x.lpNorm<1>(); },
      [](const Eigen::VectorXd& x) { return x.squaredNorm(); },
      [xi](const Eigen::VectorXd& x) { return xi.dot(x); },
      [xi](const Eigen::VectorXd& x) {
        return xi.dot(x.array().cos().matrix());
      },
  };
  return suite;
}

std::vector<double> autocorrelation(std::span<const double> series,
                                    int max_lag) {
  const std::size_t n = series.size();
  if (max_lag < 1) throw InvalidInputError("autocorrelation: max_lag < 1");
  if (n < 4 * static_cast<std::size_t>(max_lag)) {
    throw InvalidInputError(
        "autocorrelation: series length must be >= 4 * max_lag");
  }

  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);

  // Zero-padded FFT periodogram gives all lagged products in O(n log n).
  std::size_t padded = 1;
  while (padded < 2 * n) padded <<= 1;
  std::vector<double> centered(padded, 0.0);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, centered);
  for (auto& c : freq) c *= std::conj(c);
  std::vector<std::complex<double>> lagged;
  fft.inv(lagged, freq);

  const double c0 = lagged[0].real() / static_cast<double>(n);
  // A constant series leaves only cancellation noise after mean removal;
  // flag anything whose standard deviation is below ~1e-12 of the raw scale.
  double scale = 0.0;
  for (double v : series) scale = std::max(scale, std::abs(v));
  if (!(c0 > 0.0) || c0 <= scale * scale * 1e-24) {
    throw DegenerateSeriesError("autocorrelation: constant series");
  }

  std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    rho[static_cast<std::size_t>(k)] =
        lagged[static_cast<std::size_t>(k)].real() / static_cast<double>(n) /
        c0;
  }
  rho[0] = 1.0;
  return rho;
}

IactResult iact_with_details(std::span<const double> series) {
  const int max_lag = static_cast<int>(series.size() / 4);
  if (max_lag < 1) {
    throw InvalidInputError("iact: series too short");
  }
  const std::vector<double> rho = autocorrelation(series, max_lag);

  // Geyer initial positive sequence: accumulate pairs rho(2j) + rho(2j+1)
  // while they stay positive. Truncation at the lag of the last kept pair.
  double sum_pairs = 0.0;
  int truncation = 0;
  for (int j = 0; 2 * j + 1 <= max_lag; ++j) {
    const double pair = rho[static_cast<std::size_t>(2 * j)] +
                        rho[static_cast<std::size_t>(2 * j + 1)];
    if (pair <= 0.0) break;
    sum_pairs += pair;
    truncation = 2 * j + 1;
  }
  double value = 2.0 * sum_pairs - 1.0;  // equals 1 + 2 sum_{k=1}^T rho(k)
  value = std::max(value, 1.0);

  IactResult result;
  result.iact = value;
  result.truncation_lag = truncation;
  result.acf.assign(rho.begin(),
                    rho.begin() + static_cast<std::ptrdiff_t>(truncation) + 1);
  return result;
}

double iact(std::span<const double> series) {
  return iact_with_details(series).iact;
}

IactEstimate estimate_gap(const ChainResult& chain,
                          const TestFunctionSuite& suite) {
  const Eigen::Index n_steps = chain.samples.rows();
  if (n_steps > 0 &&
      (chain.samples.rowwise() - chain.samples.row(0)).cwiseAbs().maxCoeff() ==
          0.0) {
    // Every test-function series would be constant; skip the per-function
    // warnings and report the chain itself as degenerate.
    throw DegenerateSeriesError("estimate_gap: chain never moved");
  }
  IactEstimate est;
  est.acceptance_rate = chain.acceptance_rate();

  std::vector<double> series(static_cast<std::size_t>(n_steps));
  double max_iact = -1.0;
  for (std::size_t f = 0; f < suite.functions.size(); ++f) {
    for (Eigen::Index k = 0; k < n_steps; ++k) {
      series[static_cast<std::size_t>(k)] =
          suite.functions[f](chain.samples.row(k).transpose());
    }
    IactResult r;
    try {
      r = iact_with_details(series);
    } catch (const DegenerateSeriesError&) {
      std::cerr << "nsgap: warning: test function '" << suite.labels[f]
                << "' is constant along the chain, dropped\n";
      continue;
    }
    est.labels.push_back(suite.labels[f]);
    est.per_function_iact.push_back(r.iact);
    est.per_function_acf.push_back(std::move(r.acf));
    est.truncation_lags.push_back(r.truncation_lag);
    max_iact = std::max(max_iact, r.iact);
  }
  if (est.per_function_iact.empty()) {
    throw DegenerateSeriesError(
        "estimate_gap: every test-function series is constant");
  }
  est.gap_estimate = 2.0 / (1.0 + max_iact);
  return est;
}

TrialSummary aggregate_trials(const std::vector<IactEstimate>& estimates) {
  if (estimates.size() < 2) {
    throw InvalidInputError("aggregate_trials: need at least 2 trials");
  }
  const double n = static_cast<double>(estimates.size());
  TrialSummary s;
  s.n_trials = static_cast<int>(estimates.size());
  for (const auto& e : estimates) {
    s.mean_gap += e.gap_estimate;
    s.mean_acceptance += e.acceptance_rate;
  }
  s.mean_gap /= n;
  s.mean_acceptance /= n;
  double ss = 0.0;
  for (const auto& e : estimates) {
    const double dv = e.gap_estimate - s.mean_gap;
    ss += dv * dv;
  }
  s.stderr_gap = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

}  // namespace nsgap
