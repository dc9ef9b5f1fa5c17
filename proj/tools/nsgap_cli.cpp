// Command-line front end: run chains, estimate gaps from traces, print
// theoretical bound reports, run discretization studies, and reproduce the
// benchmark sweeps as CSV.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nsgap/csv.hpp"
#include "nsgap/diagnostics.hpp"
#include "nsgap/errors.hpp"
#include "nsgap/harness.hpp"
#include "nsgap/oracle.hpp"
#include "nsgap/potential.hpp"
#include "nsgap/sampler.hpp"
#include "nsgap/theory.hpp"

namespace {

using namespace nsgap;

ModelKind parse_model(const std::string& name) {
  if (name == "lasso") return ModelKind::Lasso;
  if (name == "logistic") return ModelKind::Logistic;
  if (name == "gaussian1d") return ModelKind::Gaussian1d;
  throw InvalidInputError("unknown model '" + name + "'");
}

KernelKind parse_kernel(const std::string& name) {
  if (name == "rwm") return KernelKind::RWM;
  if (name == "mala") return KernelKind::MALA;
  throw InvalidInputError("unknown kernel '" + name + "'");
}

struct SampleArgs {
  std::string model = "lasso";
  std::string kernel = "rwm";
  int d = 10;
  double alpha_decay = 0.5;
  int n_obs = 1000;
  double sparsity = 0.1;
  double lambda = 1.0;
  double step_h = 0.1;
  int steps = 20000;
  int burn_in = 2000;
  std::uint64_t seed = 20240901;
  std::string out = "trace.csv";
  std::string config;
};

int cmd_sample(const SampleArgs& args) {
  ExperimentConfig cfg;
  if (!args.config.empty()) cfg = parse_config_file(args.config);
  cfg.model = parse_model(args.model);
  cfg.kernel = parse_kernel(args.kernel);
  cfg.d = args.d;
  cfg.alpha_decay = args.alpha_decay;
  cfg.n_obs = args.n_obs;
  cfg.sparsity = args.sparsity;
  cfg.master_seed = args.seed;

  const CompositePotential pot = build_cell_potential(cfg, args.lambda);
  const Eigen::VectorXd x0 = find_mode(pot, args.lambda);
  const ChainResult chain =
      run_chain(pot, KernelSpec(cfg.kernel, args.step_h), x0, args.steps,
                args.burn_in, derive_seed(args.seed, 42));
  write_trace_csv(args.out, chain);
  std::cout << "wrote " << args.out << " (" << args.steps
            << " steps, acceptance " << chain.acceptance_rate() << ")\n";
  return 0;
}

struct EstimateArgs {
  std::string trace;
  std::string model = "lasso";
  int d = 10;
  double alpha_decay = 0.5;
  int n_obs = 1000;
  double sparsity = 0.1;
  double lambda = 1.0;
  std::uint64_t seed = 20240901;
};

int cmd_estimate_gap(const EstimateArgs& args) {
  ExperimentConfig cfg;
  cfg.model = parse_model(args.model);
  cfg.d = args.d;
  cfg.alpha_decay = args.alpha_decay;
  cfg.n_obs = args.n_obs;
  cfg.sparsity = args.sparsity;
  cfg.master_seed = args.seed;

  const CompositePotential pot = build_cell_potential(cfg, args.lambda);
  ChainResult chain = read_trace_csv(args.trace);
  if (chain.samples.cols() != pot.dim) {
    throw InvalidInputError("trace dimension does not match the model");
  }
  const TestFunctionSuite suite = TestFunctionSuite::standard(
      pot, TestFunctionSuite::draw_probe(pot.dim, derive_seed(args.seed, 3)));
  const IactEstimate est = estimate_gap(chain, suite);

  std::cout << "function_label,iact,truncation_lag\n";
  for (std::size_t i = 0; i < est.labels.size(); ++i) {
    std::cout << est.labels[i] << ',' << format_full(est.per_function_iact[i])
              << ',' << est.truncation_lags[i] << '\n';
  }
  std::cout << "gap_estimate = " << format_full(est.gap_estimate)
            << " (acceptance " << format_full(est.acceptance_rate) << ")\n";
  return 0;
}

struct BoundsArgs {
  std::string kernel = "rwm";
  std::string regime = "convex";
  int d = 10;
  double M = 1.0;
  double m = 0.0;
  double L = 0.0;
  double c_lsi = 0.0;
  double c_pi = 0.0;
  double step_h = 0.01;
  bool csv = false;
};

int cmd_bounds(const BoundsArgs& args) {
  const KernelKind kind = parse_kernel(args.kernel);
  BoundReport report;
  IsoProfile profile = IsoProfile::poincare(1.0);
  if (kind == KernelKind::RWM) {
    if (args.regime == "convex") {
      profile = IsoProfile::convex(args.m);
    } else if (args.regime == "lsi") {
      profile = IsoProfile::lsi(args.c_lsi);
    } else if (args.regime == "poincare") {
      profile = IsoProfile::poincare(args.c_pi);
    } else {
      throw InvalidInputError("unknown regime '" + args.regime + "'");
    }
    report = rwm_gap_bound(profile, args.step_h, args.d, args.M, args.L);
  } else {
    report = mala_gap_bound(args.m, args.step_h, args.d, args.M, args.L,
                            /*f_concave=*/true);
  }

  std::printf("kernel      %s\n", args.kernel.c_str());
  std::printf("regime      %s\n",
              kind == KernelKind::RWM ? args.regime.c_str() : "convex");
  std::printf("d           %d\n", args.d);
  std::printf("M           %.17g\n", args.M);
  if (args.m > 0.0) std::printf("m           %.17g\n", args.m);
  std::printf("L           %.17g\n", args.L);
  if (args.c_lsi > 0.0) std::printf("C_LSI       %.17g\n", args.c_lsi);
  if (args.c_pi > 0.0) std::printf("C_PI        %.17g\n", args.c_pi);
  std::printf("h           %.17g\n", args.step_h);
  std::printf("h_max       %.17g\n", report.h_max);
  std::printf("epsilon     %.17g\n", report.epsilon);
  std::printf("delta       %.17g\n", report.delta);
  std::printf("gap_lower   %.17g\n", report.gap_lower);
  for (const auto& [name, value] : report.constants_used) {
    std::printf("constant %-8s %.17g\n", name.c_str(), value);
  }
  if (args.csv) {
    auto field = [](double v) { return v > 0.0 ? format_full(v) : ""; };
    std::printf(
        "kernel,regime,d,M,m,L,C_LSI,C_PI,h,h_max,epsilon,delta,gap_lower\n");
    std::printf("%s,%s,%d,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s\n",
                args.kernel.c_str(),
                kind == KernelKind::RWM ? args.regime.c_str() : "convex",
                args.d, format_full(args.M).c_str(), field(args.m).c_str(),
                format_full(args.L).c_str(), field(args.c_lsi).c_str(),
                field(args.c_pi).c_str(), format_full(args.step_h).c_str(),
                format_full(report.h_max).c_str(),
                format_full(report.epsilon).c_str(),
                format_full(report.delta).c_str(),
                format_full(report.gap_lower).c_str());
  }
  return 0;
}

struct OracleArgs {
  std::string model = "gaussian1d";
  std::string kernel = "rwm";
  double lambda = 0.0;
  double step_h = 0.5;
  int n = 400;
  double domain_R = 8.0;
  int refinements = 2;
};

int cmd_oracle(const OracleArgs& args) {
  if (args.model != "gaussian1d") {
    throw InvalidInputError("oracle supports only the 1-d model gaussian1d "
                            "(use --lambda for the 1-d Lasso)");
  }
  ExperimentConfig cfg;
  cfg.model = ModelKind::Gaussian1d;
  const CompositePotential pot = build_cell_potential(cfg, args.lambda);
  const KernelSpec kernel(parse_kernel(args.kernel), args.step_h);

  std::cout << "n,R,gap\n";
  int n = args.n;
  for (int k = 0; k <= args.refinements; ++k, n *= 2) {
    const double gap = exact_gap(discretize_kernel(pot, kernel, n,
                                                   args.domain_R));
    std::cout << n << ',' << format_full(args.domain_R) << ','
              << format_full(gap) << '\n';
  }
  return 0;
}

struct ReproduceArgs {
  std::string figure;
  std::string scale = "desk";
  std::string out_dir = ".";
  std::uint64_t seed = 20240901;
  int workers = 0;
};

// Sweep grids for the benchmark figures. Within each grid the smallest
// step sizes sit at or below the theoretical ceilings (so the bound columns
// are populated) and the largest show the acceptance breakdown; the middle
// is where the chain length resolves the gap and the power law is visible.
ExperimentConfig figure_config(const std::string& figure,
                               const std::string& scale) {
  ExperimentConfig cfg;
  cfg.lambda_grid = {0.5, 2.0, 8.0};
  const bool desk = scale == "desk";
  if (figure == "fig1" || figure == "fig2") {
    cfg.model = ModelKind::Lasso;
    cfg.d = 10;
    cfg.alpha_decay = 0.5;
    cfg.n_trials = desk ? 10 : 40;
    cfg.chain_length = desk ? 20000 : 100000;
    cfg.burn_in = desk ? 2000 : 10000;
    if (figure == "fig1") {
      cfg.kernel = KernelKind::RWM;
      cfg.h_grid = log_grid(3.16e-3, 1.0);
    } else {
      cfg.kernel = KernelKind::MALA;
      cfg.h_grid = log_grid(2.15e-5, 0.1);
    }
  } else if (figure == "fig3" || figure == "fig4") {
    cfg.model = ModelKind::Logistic;
    cfg.d = 50;
    cfg.n_obs = 1000;
    cfg.sparsity = 0.1;
    cfg.n_trials = desk ? 8 : 25;
    cfg.chain_length = desk ? 20000 : 50000;
    cfg.burn_in = desk ? 2000 : 10000;
    if (figure == "fig3") {
      cfg.kernel = KernelKind::RWM;
      cfg.h_grid = log_grid(4.2e-4, 0.0316);
    } else {
      cfg.kernel = KernelKind::MALA;
      cfg.h_grid = log_grid(2.15e-5, 2.15e-3);
    }
  } else {
    throw InvalidInputError("unknown figure '" + figure +
                            "' (expected fig1..fig4)");
  }
  return cfg;
}

int cmd_reproduce(const ReproduceArgs& args) {
  if (args.scale != "desk" && args.scale != "paper") {
    throw InvalidInputError("unknown scale '" + args.scale + "'");
  }
  ExperimentConfig cfg = figure_config(args.figure, args.scale);
  cfg.master_seed = args.seed;
  cfg.workers = args.workers;

  const std::vector<ExperimentRow> rows = run_experiment(cfg);
  const std::string gap_path = args.out_dir + "/" + args.figure + "_gap.csv";
  const std::string acc_path =
      args.out_dir + "/" + args.figure + "_acceptance.csv";
  write_gap_csv(gap_path, rows);
  write_acceptance_csv(acc_path, rows);
  std::cout << "wrote " << gap_path << " and " << acc_path << " ("
            << rows.size() << " cells)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metropolis samplers for non-smooth targets: spectral gap "
               "estimation, theoretical bounds and discretized-kernel "
               "oracles"};
  app.set_help_flag("--help", "print help");  // frees -h for step sizes
  app.require_subcommand(1);

  SampleArgs sample;
  auto* cmd_s = app.add_subcommand("sample", "run one chain, write a trace");
  cmd_s->add_option("--model", sample.model, "lasso|logistic|gaussian1d");
  cmd_s->add_option("--kernel", sample.kernel, "rwm|mala");
  cmd_s->add_option("-d,--dim", sample.d, "dimension");
  cmd_s->add_option("--alpha", sample.alpha_decay, "singular value decay");
  cmd_s->add_option("--n-obs", sample.n_obs, "logistic observation count");
  cmd_s->add_option("--sparsity", sample.sparsity, "logistic sparsity");
  cmd_s->add_option("--lambda", sample.lambda, "regularization strength");
  cmd_s->add_option("-h,--step", sample.step_h, "step size h");
  cmd_s->add_option("--steps", sample.steps, "post burn-in steps");
  cmd_s->add_option("--burn-in", sample.burn_in, "burn-in steps");
  cmd_s->add_option("--seed", sample.seed, "seed");
  cmd_s->add_option("--out", sample.out, "trace CSV path");
  cmd_s->add_option("--config", sample.config, "key=value config file");

  EstimateArgs est;
  auto* cmd_e = app.add_subcommand("estimate-gap",
                                   "IACT gap estimate from a trace");
  cmd_e->add_option("--trace", est.trace, "trace CSV path")->required();
  cmd_e->add_option("--model", est.model, "lasso|logistic|gaussian1d");
  cmd_e->add_option("-d,--dim", est.d, "dimension");
  cmd_e->add_option("--alpha", est.alpha_decay, "singular value decay");
  cmd_e->add_option("--n-obs", est.n_obs, "logistic observation count");
  cmd_e->add_option("--sparsity", est.sparsity, "logistic sparsity");
  cmd_e->add_option("--lambda", est.lambda, "regularization strength");
  cmd_e->add_option("--seed", est.seed, "seed the model was built from");

  BoundsArgs bounds;
  auto* cmd_b = app.add_subcommand("bounds", "print a bound report");
  cmd_b->add_option("--kernel", bounds.kernel, "rwm|mala");
  cmd_b->add_option("--regime", bounds.regime, "convex|lsi|poincare");
  cmd_b->add_option("-d,--dim", bounds.d, "dimension");
  cmd_b->add_option("-M,--smoothness", bounds.M, "gradient Lipschitz bound");
  cmd_b->add_option("-m,--concavity", bounds.m, "strong concavity constant");
  cmd_b->add_option("-L,--lipschitz", bounds.L, "non-smooth Lipschitz bound");
  cmd_b->add_option("--c-lsi", bounds.c_lsi, "log-Sobolev constant");
  cmd_b->add_option("--c-pi", bounds.c_pi, "Poincare constant");
  cmd_b->add_option("-h,--step", bounds.step_h, "step size h");
  cmd_b->add_flag("--csv", bounds.csv, "also print a CSV row");

  OracleArgs oracle;
  auto* cmd_o = app.add_subcommand("oracle",
                                   "discretized-kernel refinement study");
  cmd_o->add_option("--model", oracle.model, "gaussian1d");
  cmd_o->add_option("--kernel", oracle.kernel, "rwm|mala");
  cmd_o->add_option("--lambda", oracle.lambda,
                    "l1 strength (0 = pure Gaussian)");
  cmd_o->add_option("-h,--step", oracle.step_h, "step size h");
  cmd_o->add_option("-n,--cells", oracle.n, "grid cells");
  cmd_o->add_option("-R,--domain", oracle.domain_R, "half width of [-R, R]");
  cmd_o->add_option("--refinements", oracle.refinements,
                    "number of grid doublings");

  ReproduceArgs rep;
  auto* cmd_r = app.add_subcommand("reproduce",
                                   "run a benchmark sweep, write CSVs");
  cmd_r->add_option("figure", rep.figure, "fig1|fig2|fig3|fig4")->required();
  cmd_r->add_option("--scale", rep.scale, "desk|paper");
  cmd_r->add_option("--out-dir", rep.out_dir, "output directory");
  cmd_r->add_option("--seed", rep.seed, "master seed");
  cmd_r->add_option("--workers", rep.workers,
                    "worker threads (0 = NSGAP_WORKERS or hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems exit 1
  }

  try {
    if (cmd_s->parsed()) return cmd_sample(sample);
    if (cmd_e->parsed()) return cmd_estimate_gap(est);
    if (cmd_b->parsed()) return cmd_bounds(bounds);
    if (cmd_o->parsed()) return cmd_oracle(oracle);
    if (cmd_r->parsed()) return cmd_reproduce(rep);
  } catch (const std::exception& e) {
    std::cerr << "nsgap: error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
