#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nsgap/potential.hpp"
#include "nsgap/sampler.hpp"

namespace nsgap {

enum class ModelKind { Lasso, Logistic, Gaussian1d };

/// One sweep description: a model family, a kernel, and the (h, lambda) grid
/// it is evaluated on. Parsed from a flat key=value config file with '#'
/// comments; see parse_config for the key list.
struct ExperimentConfig {
  ModelKind model = ModelKind::Lasso;
  int d = 10;
  double alpha_decay = 0.5;
  int n_obs = 1000;       // logistic only
  double sparsity = 0.1;  // logistic only
  KernelKind kernel = KernelKind::RWM;
  std::vector<double> h_grid;
  std::vector<double> lambda_grid;
  int n_trials = 10;
  int chain_length = 20000;
  int burn_in = 2000;
  std::uint64_t master_seed = 20240901;
  std::string output_path;  // when set, gap rows are appended as they finish
  bool shared_probe = true;
  int workers = 0;  // 0 = NSGAP_WORKERS env var, then hardware concurrency
};

/// Aggregated result of one (h, lambda) sweep cell.
struct ExperimentRow {
  std::string model;
  std::string kernel;
  double h = 0.0;
  double lambda = 0.0;
  int trial_count = 0;
  int failures = 0;  // diverged chains, excluded from the aggregates
  double mean_gap = 0.0;
  double stderr_gap = 0.0;
  double mean_acceptance = 0.0;
  std::optional<double> theory_lower_bound;  // present when h admissible
  std::optional<double> h_max;               // present when computable
  bool resolved = false;  // max IACT small enough for the chain length
};

/// A cell counts as resolved when the implied max IACT stays below
/// chain_length / kResolutionFactor; beyond that the truncated-ACF estimator
/// saturates near 2/(c K) and stops tracking the true gap.
inline constexpr double kResolutionFactor = 25.0;

/// Runs the full sweep: for every (h, lambda) cell, n_trials seeded chains
/// from the target mode, IACT gap estimates, acceptance averages, and the
/// theory lower bound when the step size is admissible. Deterministic per
/// master_seed, independent of worker count. Diverged chains are counted per
/// cell, not propagated.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

/// Least-squares slope of log(mean_gap) against log(h) over rows whose h is
/// in h_subset. Rows with nonpositive gap are excluded with a warning;
/// fewer than 3 usable rows throws InsufficientDataError.
double fit_scaling_exponent(const std::vector<ExperimentRow>& rows,
                            const std::vector<double>& h_subset);

/// Parses a key=value config file ('#' starts a comment). Unknown keys and
/// unparsable values raise InvalidInputError naming the key. Keys: model,
/// kernel, d, alpha_decay, n_obs, sparsity, h_grid, lambda_grid (comma
/// lists; scalar h / lambda also accepted), n_trials, chain_length, burn_in,
/// master_seed, output_path, shared_probe, workers.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

/// Lasso instance used by the sweeps: A = Sigma V^T from the master seed and
/// a standard Gaussian observation vector (the regularization strength is a
/// sweep variable, so reg_lambda is left at 0 here).
LassoModel make_experiment_lasso(int d, double alpha_decay,
                                 std::uint64_t master_seed);

/// Builds the potential for one sweep cell. Gaussian1d is the 1x1 Lasso with
/// A = 1, y = 0, so lambda = 0 gives the standard Gaussian.
CompositePotential build_cell_potential(const ExperimentConfig& cfg,
                                        double lambda);

/// Target mode via proximal gradient: x <- soft_threshold(x + grad f(x)/M,
/// lambda/M). Used as the chain starting point to shorten burn-in.
Eigen::VectorXd find_mode(const CompositePotential& pot, double lambda_l1,
                          int iterations = 200);

/// Log-spaced grid with `per_decade` points per decade covering [lo, hi].
std::vector<double> log_grid(double lo, double hi, int per_decade = 6);

/// CSV writers; headers are documented in the README. Mean/stderr columns
/// carry 17 significant digits; absent optionals are empty fields.
void write_gap_csv(const std::string& path,
                   const std::vector<ExperimentRow>& rows);
void write_acceptance_csv(const std::string& path,
                          const std::vector<ExperimentRow>& rows);

/// Chain trace IO for the CLI: columns step, x_1..x_d, accepted.
void write_trace_csv(const std::string& path, const ChainResult& chain);
ChainResult read_trace_csv(const std::string& path);

const char* model_name(ModelKind m);
const char* kernel_name(KernelKind k);

}  // namespace nsgap
