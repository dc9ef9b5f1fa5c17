#include "nsgap/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "nsgap/csv.hpp"
#include "nsgap/diagnostics.hpp"
#include "nsgap/errors.hpp"
#include "nsgap/parallel.hpp"
#include "nsgap/theory.hpp"

namespace nsgap {

namespace {

// Seed-stream indices hanging off the master seed.
constexpr std::uint64_t kDesignStream = 1;
constexpr std::uint64_t kObservationStream = 2;
constexpr std::uint64_t kProbeStream = 3;
constexpr std::uint64_t kCellStreamBase = 1000;

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

std::string csv_opt(const std::optional<double>& v) {
  return v ? format_full(*v) : std::string();
}

const char* kGapHeader =
    "model,kernel,lambda,h,h_max,trials,failures,mean_gap,stderr_gap,"
    "theory_lower_bound,resolved";

std::string gap_row_line(const ExperimentRow& r) {
  std::ostringstream line;
  line << r.model << ',' << r.kernel << ',' << format_full(r.lambda) << ','
       << format_full(r.h) << ',' << csv_opt(r.h_max) << ',' << r.trial_count
       << ',' << r.failures << ',' << format_full(r.mean_gap) << ','
       << format_full(r.stderr_gap) << ',' << csv_opt(r.theory_lower_bound)
       << ',' << (r.resolved ? 1 : 0);
  return line.str();
}

}  // namespace

const char* model_name(ModelKind m) {
  switch (m) {
    case ModelKind::Lasso:
      return "lasso";
    case ModelKind::Logistic:
      return "logistic";
    case ModelKind::Gaussian1d:
      return "gaussian1d";
  }
  return "unknown";
}

const char* kernel_name(KernelKind k) {
  return k == KernelKind::RWM ? "rwm" : "mala";
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi >= lo) || per_decade < 1) {
    throw InvalidInputError("log_grid: need 0 < lo <= hi, per_decade >= 1");
  }
  std::vector<double> grid;
  const double step = 1.0 / static_cast<double>(per_decade);
  const int n = static_cast<int>(
      std::floor(std::log10(hi / lo) / step + 1e-9)) + 1;
  grid.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid.push_back(lo * std::pow(10.0, step * static_cast<double>(i)));
  }
  return grid;
}

LassoModel make_experiment_lasso(int d, double alpha_decay,
                                 std::uint64_t master_seed) {
  LassoModel model;
  model.design_A =
      lasso_design_matrix(d, alpha_decay, derive_seed(master_seed, kDesignStream));
  SplitMix64 rng(derive_seed(master_seed, kObservationStream));
  model.observation_y = rng.normal_vector(d);
  model.reg_lambda = 0.0;
  return model;
}

CompositePotential build_cell_potential(const ExperimentConfig& cfg,
                                        double lambda) {
  switch (cfg.model) {
    case ModelKind::Lasso: {
      const LassoModel m =
          make_experiment_lasso(cfg.d, cfg.alpha_decay, cfg.master_seed);
      return make_bayesian_lasso(m.design_A, m.observation_y, lambda);
    }
    case ModelKind::Logistic: {
      const LogisticModel m =
          synth_logistic_data(cfg.n_obs, cfg.d, cfg.sparsity,
                              derive_seed(cfg.master_seed, kDesignStream));
      return make_logistic_laplace(m.features, m.labels, lambda);
    }
    case ModelKind::Gaussian1d: {
      Eigen::MatrixXd a(1, 1);
      a(0, 0) = 1.0;
      return make_bayesian_lasso(a, Eigen::VectorXd::Zero(1), lambda);
    }
  }
  throw InvalidInputError("build_cell_potential: unknown model");
}

Eigen::VectorXd find_mode(const CompositePotential& pot, double lambda_l1,
                          int iterations) {
  const double step = 1.0 / std::max(pot.smoothness_M, 1e-12);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(pot.dim);
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd y = x + step * pot.smooth_grad(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = soft_threshold(y[i], step * lambda_l1);
    }
  }
  return x;
}

namespace {

void validate(const ExperimentConfig& cfg) {
  if (cfg.h_grid.empty() || cfg.lambda_grid.empty()) {
    throw InvalidInputError("run_experiment: h_grid and lambda_grid must be "
                            "nonempty");
  }
  for (double h : cfg.h_grid) {
    if (!(h > 0.0)) throw InvalidInputError("run_experiment: h must be > 0");
  }
  for (double l : cfg.lambda_grid) {
    if (l < 0.0) throw InvalidInputError("run_experiment: lambda must be >= 0");
  }
  if (cfg.n_trials < 2) {
    throw InvalidInputError("run_experiment: n_trials must be >= 2");
  }
  if (cfg.chain_length < 8) {
    throw InvalidInputError("run_experiment: chain_length too short");
  }
  if (cfg.burn_in < 0) {
    throw InvalidInputError("run_experiment: burn_in must be >= 0");
  }
  if (cfg.chain_length < 10 * cfg.burn_in) {
    std::cerr << "nsgap: warning: chain_length < 10 * burn_in; estimates "
                 "may be wasteful\n";
  }
}

struct CellBounds {
  std::optional<double> h_max;
  std::optional<double> gap_lower;  // only set when h <= h_max
};

CellBounds cell_bounds(const ExperimentConfig& cfg,
                       const CompositePotential& pot, double h) {
  CellBounds out;
  if (cfg.kernel == KernelKind::RWM) {
    const double h_max = rwm_max_step(pot.dim, pot.smoothness_M,
                                      pot.lipschitz_L);
    if (std::isfinite(h_max)) out.h_max = h_max;
    if (pot.strong_concavity_m && h <= h_max) {
      out.gap_lower = rwm_gap_bound(IsoProfile::convex(*pot.strong_concavity_m),
                                    h, pot.dim, pot.smoothness_M,
                                    pot.lipschitz_L)
                          .gap_lower;
    }
  } else {
    if (pot.strong_concavity_m) {
      const double h_max = mala_max_step(pot.dim, pot.smoothness_M,
                                         *pot.strong_concavity_m,
                                         pot.lipschitz_L);
      out.h_max = h_max;
      if (pot.f_concave && h <= h_max) {
        out.gap_lower = mala_gap_bound(*pot.strong_concavity_m, h, pot.dim,
                                       pot.smoothness_M, pot.lipschitz_L,
                                       pot.f_concave)
                            .gap_lower;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg_in) {
  validate(cfg_in);

  // Rows are emitted sorted by (lambda, h); sorting the grids up front also
  // makes the per-cell seed derivation independent of the order the grids
  // were written in.
  ExperimentConfig cfg = cfg_in;
  std::sort(cfg.h_grid.begin(), cfg.h_grid.end());
  std::sort(cfg.lambda_grid.begin(), cfg.lambda_grid.end());

  std::ofstream incremental;
  if (!cfg.output_path.empty()) {
    incremental.open(cfg.output_path);
    if (!incremental) {
      throw Error("run_experiment: cannot open " + cfg.output_path);
    }
    incremental << kGapHeader << '\n';
  }

  std::vector<ExperimentRow> rows;
  rows.reserve(cfg.h_grid.size() * cfg.lambda_grid.size());

  const Eigen::VectorXd shared_probe = TestFunctionSuite::draw_probe(
      cfg.model == ModelKind::Gaussian1d ? 1 : cfg.d,
      derive_seed(cfg.master_seed, kProbeStream));

  int cell_index = 0;
  for (std::size_t li = 0; li < cfg.lambda_grid.size(); ++li) {
    const double lambda = cfg.lambda_grid[li];
    const CompositePotential pot = build_cell_potential(cfg, lambda);
    const Eigen::VectorXd x0 = find_mode(pot, lambda);

    for (std::size_t hi = 0; hi < cfg.h_grid.size(); ++hi, ++cell_index) {
      const double h = cfg.h_grid[hi];
      const KernelSpec kernel(cfg.kernel, h);
      const std::uint64_t cell_seed = derive_seed(
          cfg.master_seed, kCellStreamBase + static_cast<std::uint64_t>(
                                                 cell_index));

      std::vector<std::optional<IactEstimate>> trials(
          static_cast<std::size_t>(cfg.n_trials));
      parallel_for(cfg.n_trials, cfg.workers, [&](int t) {
        const std::uint64_t seed =
            derive_seed(cell_seed, static_cast<std::uint64_t>(t) + 1);
        const Eigen::VectorXd probe =
            cfg.shared_probe
                ? shared_probe
                : TestFunctionSuite::draw_probe(pot.dim,
                                                derive_seed(seed, kProbeStream));
        try {
          const ChainResult chain = run_chain(pot, kernel, x0,
                                              cfg.chain_length, cfg.burn_in,
                                              seed);
          trials[static_cast<std::size_t>(t)] =
              estimate_gap(chain, TestFunctionSuite::standard(pot, probe));
        } catch (const DivergedChainError&) {
          // counted below; the sweep keeps going
        } catch (const DegenerateSeriesError&) {
          // a chain that never moved (e.g. trapped on an l1 kink at large
          // lambda h) has no usable series; counted as a failure as well
        }
      });

      ExperimentRow row;
      row.model = model_name(cfg.model);
      row.kernel = kernel_name(cfg.kernel);
      row.h = h;
      row.lambda = lambda;
      row.trial_count = cfg.n_trials;

      std::vector<IactEstimate> ok;
      ok.reserve(trials.size());
      for (auto& t : trials) {
        if (t) ok.push_back(std::move(*t));
      }
      row.failures = cfg.n_trials - static_cast<int>(ok.size());
      if (ok.size() >= 2) {
        const TrialSummary s = aggregate_trials(ok);
        row.mean_gap = s.mean_gap;
        row.stderr_gap = s.stderr_gap;
        row.mean_acceptance = s.mean_acceptance;
      } else {
        row.mean_gap = std::numeric_limits<double>::quiet_NaN();
        row.stderr_gap = std::numeric_limits<double>::quiet_NaN();
        row.mean_acceptance = std::numeric_limits<double>::quiet_NaN();
      }

      const CellBounds bounds = cell_bounds(cfg, pot, h);
      row.h_max = bounds.h_max;
      row.theory_lower_bound = bounds.gap_lower;
      row.resolved =
          std::isfinite(row.mean_gap) &&
          row.mean_gap >=
              2.0 / (1.0 + static_cast<double>(cfg.chain_length) /
                               kResolutionFactor);

      if (incremental.is_open()) {
        incremental << gap_row_line(row) << '\n';
        incremental.flush();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

double fit_scaling_exponent(const std::vector<ExperimentRow>& rows,
                            const std::vector<double>& h_subset) {
  auto in_subset = [&](double h) {
    for (double hs : h_subset) {
      if (std::abs(h - hs) <= 1e-12 * std::max(std::abs(hs), 1.0)) return true;
    }
    return false;
  };

  std::vector<double> log_h;
  std::vector<double> log_gap;
  for (const auto& r : rows) {
    if (!in_subset(r.h)) continue;
    if (!(r.mean_gap > 0.0) || !std::isfinite(r.mean_gap)) {
      std::cerr << "nsgap: warning: dropping h = " << r.h
                << " from slope fit (nonpositive gap estimate)\n";
      continue;
    }
    log_h.push_back(std::log(r.h));
    log_gap.push_back(std::log(r.mean_gap));
  }
  if (log_h.size() < 3) {
    throw InsufficientDataError(
        "fit_scaling_exponent: fewer than 3 usable rows");
  }

  const double n = static_cast<double>(log_h.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    mx += log_h[i];
    my += log_gap[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    sxx += (log_h[i] - mx) * (log_h[i] - mx);
    sxy += (log_h[i] - mx) * (log_gap[i] - my);
  }
  if (sxx <= 0.0) {
    throw InsufficientDataError("fit_scaling_exponent: degenerate h values");
  }
  return sxy / sxx;
}

namespace {

std::vector<double> parse_double_list(const std::string& value,
                                      const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
    } catch (const std::exception&) {
      throw InvalidInputError("config: bad number for key '" + key + "': " +
                              item);
    }
  }
  if (out.empty()) {
    throw InvalidInputError("config: empty list for key '" + key + "'");
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInputError("config: line " + std::to_string(line_no) +
                              " is not key=value: '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto as_int = [&](const char* name) {
      try {
        return std::stoi(value);
      } catch (const std::exception&) {
        throw InvalidInputError("config: bad integer for key '" +
                                std::string(name) + "': " + value);
      }
    };
    auto as_double = [&](const char* name) {
      try {
        return std::stod(value);
      } catch (const std::exception&) {
        throw InvalidInputError("config: bad number for key '" +
                                std::string(name) + "': " + value);
      }
    };

    if (key == "model") {
      if (value == "lasso") {
        cfg.model = ModelKind::Lasso;
      } else if (value == "logistic") {
        cfg.model = ModelKind::Logistic;
      } else if (value == "gaussian1d") {
        cfg.model = ModelKind::Gaussian1d;
      } else {
        throw InvalidInputError("config: unknown model '" + value + "'");
      }
    } else if (key == "kernel") {
      if (value == "rwm") {
        cfg.kernel = KernelKind::RWM;
      } else if (value == "mala") {
        cfg.kernel = KernelKind::MALA;
      } else {
        throw InvalidInputError("config: unknown kernel '" + value + "'");
      }
    } else if (key == "d") {
      cfg.d = as_int("d");
    } else if (key == "alpha_decay") {
      cfg.alpha_decay = as_double("alpha_decay");
    } else if (key == "n_obs") {
      cfg.n_obs = as_int("n_obs");
    } else if (key == "sparsity") {
      cfg.sparsity = as_double("sparsity");
    } else if (key == "h_grid" || key == "h") {
      cfg.h_grid = parse_double_list(value, key);
    } else if (key == "lambda_grid" || key == "lambda") {
      cfg.lambda_grid = parse_double_list(value, key);
    } else if (key == "n_trials") {
      cfg.n_trials = as_int("n_trials");
    } else if (key == "chain_length") {
      cfg.chain_length = as_int("chain_length");
    } else if (key == "burn_in") {
      cfg.burn_in = as_int("burn_in");
    } else if (key == "master_seed") {
      try {
        cfg.master_seed = std::stoull(value);
      } catch (const std::exception&) {
        throw InvalidInputError("config: bad integer for key 'master_seed': " +
                                value);
      }
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else if (key == "shared_probe") {
      if (value == "true" || value == "1") {
        cfg.shared_probe = true;
      } else if (value == "false" || value == "0") {
        cfg.shared_probe = false;
      } else {
        throw InvalidInputError("config: bad boolean for key 'shared_probe': " +
                                value);
      }
    } else if (key == "workers") {
      cfg.workers = as_int("workers");
    } else {
      throw InvalidInputError("config: unknown key '" + key + "'");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("parse_config_file: cannot open " + path);
  return parse_config(in);
}

void write_gap_csv(const std::string& path,
                   const std::vector<ExperimentRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("write_gap_csv: cannot open " + path);
  out << kGapHeader << '\n';
  for (const auto& r : rows) out << gap_row_line(r) << '\n';
}

void write_acceptance_csv(const std::string& path,
                          const std::vector<ExperimentRow>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("write_acceptance_csv: cannot open " + path);
  out << "model,kernel,lambda,h,mean_acceptance\n";
  for (const auto& r : rows) {
    out << r.model << ',' << r.kernel << ',' << format_full(r.lambda) << ','
        << format_full(r.h) << ',' << format_full(r.mean_acceptance) << '\n';
  }
}

void write_trace_csv(const std::string& path, const ChainResult& chain) {
  std::ofstream out(path);
  if (!out) throw Error("write_trace_csv: cannot open " + path);
  const Eigen::Index d = chain.samples.cols();
  out << "step";
  for (Eigen::Index j = 0; j < d; ++j) out << ",x_" << (j + 1);
  out << ",accepted\n";
  for (Eigen::Index i = 0; i < chain.samples.rows(); ++i) {
    out << i;
    for (Eigen::Index j = 0; j < d; ++j) {
      out << ',' << format_full(chain.samples(i, j));
    }
    out << ',' << static_cast<int>(chain.accept_flags[static_cast<std::size_t>(
               i)])
        << '\n';
  }
}

ChainResult read_trace_csv(const std::string& path) {
  const Eigen::MatrixXd raw = read_matrix_csv(path);
  if (raw.cols() < 3) {
    throw Error("read_trace_csv: expected step,x_1..x_d,accepted columns");
  }
  ChainResult chain;
  const Eigen::Index d = raw.cols() - 2;
  chain.samples = raw.block(0, 1, raw.rows(), d);
  chain.accept_flags.resize(static_cast<std::size_t>(raw.rows()));
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    chain.accept_flags[static_cast<std::size_t>(i)] =
        raw(i, raw.cols() - 1) != 0.0 ? 1 : 0;
  }
  chain.kernel = KernelSpec(KernelKind::RWM, 1.0);
  return chain;
}

}  // namespace nsgap
