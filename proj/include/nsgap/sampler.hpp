#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "nsgap/potential.hpp"
#include "nsgap/rng.hpp"

namespace nsgap {

enum class KernelKind { RWM, MALA };

/// Which Metropolis kernel to run and its step size h.
struct KernelSpec {
  KernelKind kind = KernelKind::RWM;
  double step_h = 0.0;

  KernelSpec() = default;
  KernelSpec(KernelKind k, double h);  // validates h > 0 and finite
};

/// A seeded, reproducible sample path. `samples` holds the post-burn-in
/// states, one row per step; `accept_flags[k]` says whether step k moved.
/// Immutable after construction and safe to share across threads.
struct ChainResult {
  Eigen::MatrixXd samples;  // n_steps x d
  std::vector<std::uint8_t> accept_flags;
  std::uint64_t seed = 0;
  int burn_in = 0;
  KernelSpec kernel;

  double acceptance_rate() const;
};

/// Random-walk proposal x + h xi, xi ~ N(0, I). Advancing the generator is
/// the only side effect.
Eigen::VectorXd rwm_propose(const Eigen::VectorXd& x, double h,
                            SplitMix64& rng);

/// Mean of the subgradient-Langevin proposal: x + h (grad f(x) + v_s(x)).
Eigen::VectorXd mala_mean(const CompositePotential& pot,
                          const Eigen::VectorXd& x, double h);

/// Langevin proposal x + h v(x) + sqrt(2h) xi. Throws DivergedChainError if
/// the drift is non-finite.
Eigen::VectorXd mala_propose(const CompositePotential& pot,
                             const Eigen::VectorXd& x, double h,
                             SplitMix64& rng);

/// log Q_MALA(from, to) up to the additive normalizing constant shared by
/// both directions: -|to - from - h v(from)|^2 / (4h).
double mala_log_q(const CompositePotential& pot, const Eigen::VectorXd& from,
                  const Eigen::VectorXd& to, double h);

/// Log Metropolis-Hastings ratio a(x, x') = log[pi(x')Q(x',x)] -
/// log[pi(x)Q(x,x')]. For RWM the symmetric Q terms cancel and are never
/// computed. Acceptance probability is exp(min(0, a)).
double log_accept_ratio(const CompositePotential& pot,
                        const KernelSpec& kernel, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& x_new);

/// Runs burn_in + n_steps Metropolis steps from x0 and records the
/// post-burn-in states. Draw order per step: proposal noise first, then the
/// acceptance uniform; the test log u < a(x, x') is done in log space.
/// Bit-reproducible per seed.
ChainResult run_chain(const CompositePotential& pot, const KernelSpec& kernel,
                      const Eigen::VectorXd& x0, int n_steps, int burn_in,
                      std::uint64_t seed);

}  // namespace nsgap
