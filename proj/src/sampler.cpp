#include "nsgap/sampler.hpp"

#include <cmath>
#include <limits>

#include "nsgap/errors.hpp"

namespace nsgap {

KernelSpec::KernelSpec(KernelKind k, double h) : kind(k), step_h(h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidInputError("KernelSpec: step_h must be positive and finite");
  }
}

double ChainResult::acceptance_rate() const {
  if (accept_flags.empty()) return 0.0;
  double n_accepted = 0.0;
  for (auto f : accept_flags) n_accepted += f;
  return n_accepted / static_cast<double>(accept_flags.size());
}

Eigen::VectorXd rwm_propose(const Eigen::VectorXd& x, double h,
                            SplitMix64& rng) {
  if (!x.allFinite()) throw InvalidInputError("rwm_propose: non-finite state");
  return x + h * rng.normal_vector(static_cast<int>(x.size()));
}

Eigen::VectorXd mala_mean(const CompositePotential& pot,
                          const Eigen::VectorXd& x, double h) {
  return x + h * drift_vector(pot, x);
}

Eigen::VectorXd mala_propose(const CompositePotential& pot,
                             const Eigen::VectorXd& x, double h,
                             SplitMix64& rng) {
  if (!x.allFinite()) {
    throw InvalidInputError("mala_propose: non-finite state");
  }
  const Eigen::VectorXd drift = pot.smooth_grad(x) + pot.nonsmooth_subgrad(x);
  if (!drift.allFinite()) {
    throw DivergedChainError(
        "mala_propose: non-finite drift",
        std::vector<double>(x.data(), x.data() + x.size()));
  }
  return x + h * drift +
         std::sqrt(2.0 * h) * rng.normal_vector(static_cast<int>(x.size()));
}

double mala_log_q(const CompositePotential& pot, const Eigen::VectorXd& from,
                  const Eigen::VectorXd& to, double h) {
  return -(to - mala_mean(pot, from, h)).squaredNorm() / (4.0 * h);
}

double log_accept_ratio(const CompositePotential& pot,
                        const KernelSpec& kernel, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x_new) {
  if (!x.allFinite() || !x_new.allFinite()) {
    throw InvalidInputError("log_accept_ratio: non-finite point");
  }
  const double log_target_ratio = pot.log_density(x_new) - pot.log_density(x);
  if (kernel.kind == KernelKind::RWM) {
    return log_target_ratio;  // symmetric proposal, Q terms cancel
  }
  return log_target_ratio + mala_log_q(pot, x_new, x, kernel.step_h) -
         mala_log_q(pot, x, x_new, kernel.step_h);
}

ChainResult run_chain(const CompositePotential& pot, const KernelSpec& kernel,
                      const Eigen::VectorXd& x0, int n_steps, int burn_in,
                      std::uint64_t seed) {
  if (n_steps < 1) throw InvalidInputError("run_chain: n_steps must be >= 1");
  if (burn_in < 0) throw InvalidInputError("run_chain: burn_in must be >= 0");
  if (x0.size() != pot.dim) {
    throw InvalidInputError("run_chain: x0 dimension mismatch");
  }

  SplitMix64 rng(seed);
  ChainResult result;
  result.seed = seed;
  result.burn_in = burn_in;
  result.kernel = kernel;
  result.samples.resize(n_steps, pot.dim);
  result.accept_flags.assign(static_cast<std::size_t>(n_steps), 0);

  Eigen::VectorXd x = x0;
  const int total = burn_in + n_steps;
  for (int step = 0; step < total; ++step) {
    const Eigen::VectorXd proposal =
        kernel.kind == KernelKind::RWM
            ? rwm_propose(x, kernel.step_h, rng)
            : mala_propose(pot, x, kernel.step_h, rng);
    const double a = log_accept_ratio(pot, kernel, x, proposal);
    const double u = rng.uniform01();
    const bool accepted = std::log(u) < a;
    if (accepted) x = proposal;
    if (step >= burn_in) {
      const int k = step - burn_in;
      result.samples.row(k) = x;
      result.accept_flags[static_cast<std::size_t>(k)] = accepted ? 1 : 0;
    }
  }
  return result;
}

}  // namespace nsgap
