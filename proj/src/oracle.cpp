#include "nsgap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "nsgap/diagnostics.hpp"
#include "nsgap/errors.hpp"
#include "nsgap/parallel.hpp"

namespace nsgap {

namespace {

// Proposal log-density (with normalizer) for one grid pair. RWM is a
// Gaussian centered at the current point with variance h^2; MALA is centered
// at the drifted mean with variance 2h.
double log_proposal_density(const KernelSpec& kernel, double from, double to,
                            const Eigen::VectorXd& drift_at_from) {
  const double var = kernel.kind == KernelKind::RWM
                         ? kernel.step_h * kernel.step_h
                         : 2.0 * kernel.step_h;
  const double mean = kernel.kind == KernelKind::RWM
                          ? from
                          : from + kernel.step_h * drift_at_from[0];
  const double z = to - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) -
         0.5 * z * z / var;
}

}  // namespace

DiscretizedKernel discretize_kernel(const CompositePotential& pot,
                                    const KernelSpec& kernel, int n,
                                    double R) {
  if (pot.dim != 1) {
    throw InvalidInputError("discretize_kernel: only d = 1 is supported");
  }
  if (n < 50) throw InvalidInputError("discretize_kernel: n must be >= 50");
  if (!(R > 0.0)) throw InvalidInputError("discretize_kernel: R must be > 0");

  DiscretizedKernel dk;
  const double w = 2.0 * R / static_cast<double>(n);
  dk.cell_width = w;
  dk.grid.resize(n);
  for (int i = 0; i < n; ++i) {
    dk.grid[i] = -R + (static_cast<double>(i) + 0.5) * w;
  }

  // Per-cell target data. Midpoints never hit x = 0, so l1 kinks are safe.
  std::vector<double> log_pi(static_cast<std::size_t>(n));
  std::vector<Eigen::VectorXd> drift(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(1);
    x[0] = dk.grid[i];
    log_pi[static_cast<std::size_t>(i)] = pot.log_density(x);
    drift[static_cast<std::size_t>(i)] =
        kernel.kind == KernelKind::MALA ? drift_vector(pot, x)
                                        : Eigen::VectorXd::Zero(1);
  }

  dk.transition.resize(n, n);
  std::vector<double> leak(static_cast<std::size_t>(n), 0.0);

  parallel_for(n, 0, [&](int i) {
    double off_diagonal = 0.0;
    double proposal_mass = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) {
        proposal_mass += std::exp(log_proposal_density(
                             kernel, dk.grid[i], dk.grid[j],
                             drift[static_cast<std::size_t>(i)])) *
                         w;
        continue;
      }
      const double log_q_fwd =
          log_proposal_density(kernel, dk.grid[i], dk.grid[j],
                               drift[static_cast<std::size_t>(i)]);
      const double log_q_bwd =
          log_proposal_density(kernel, dk.grid[j], dk.grid[i],
                               drift[static_cast<std::size_t>(j)]);
      const double a = log_pi[static_cast<std::size_t>(j)] -
                       log_pi[static_cast<std::size_t>(i)] + log_q_bwd -
                       log_q_fwd;
      const double mass = std::exp(log_q_fwd) * w;
      proposal_mass += mass;
      const double accepted = std::exp(std::min(0.0, a)) * mass;
      dk.transition(i, j) = accepted;
      off_diagonal += accepted;
    }
    dk.transition(i, i) = 1.0 - off_diagonal;
    // Deficit means proposal mass escapes [-R, R]; excess means the midpoint
    // rule cannot resolve a proposal narrower than a cell. Both invalidate
    // the discretization.
    leak[static_cast<std::size_t>(i)] = std::abs(1.0 - proposal_mass);
  });

  // Stationary vector from the target itself, normalized on the grid.
  dk.stationary.resize(n);
  const double log_pi_max =
      *std::max_element(log_pi.begin(), log_pi.end());
  for (int i = 0; i < n; ++i) {
    dk.stationary[i] =
        std::exp(log_pi[static_cast<std::size_t>(i)] - log_pi_max) * w;
  }
  dk.stationary /= dk.stationary.sum();

  // A defect only invalidates the oracle where the chain actually lives, so
  // the per-row deviation is weighted by the stationary vector.
  double weighted_leak = 0.0;
  for (int i = 0; i < n; ++i) {
    weighted_leak += dk.stationary[i] * leak[static_cast<std::size_t>(i)];
  }
  if (weighted_leak > 1e-6) {
    std::ostringstream msg;
    msg << "discretize_kernel: stationary-weighted proposal mass deviates "
        << "from 1 by " << weighted_leak
        << "; increase R (tail leak) or n (proposal narrower than a cell)";
    throw InsufficientDomainError(msg.str());
  }
  return dk;
}

Eigen::VectorXd symmetrized_spectrum(const DiscretizedKernel& dk) {
  const Eigen::Index n = dk.transition.rows();
  if (n < 2 || dk.transition.cols() != n || dk.stationary.size() != n) {
    throw InvalidInputError("symmetrized_spectrum: malformed kernel");
  }

  // Similarity transform S = D^{1/2} P D^{-1/2}; reversibility makes S
  // symmetric, so a self-adjoint solver applies. Symmetrize to scrub
  // round-off asymmetry.
  Eigen::VectorXd sqrt_pi = dk.stationary.array().max(0.0).sqrt();
  Eigen::MatrixXd S(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double scale =
          sqrt_pi[j] > 0.0 ? sqrt_pi[i] / sqrt_pi[j] : 0.0;
      S(i, j) = dk.transition(i, j) * scale;
    }
  }
  S = 0.5 * (S + S.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S,
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error("symmetrized_spectrum: eigenvalue decomposition failed");
  }
  return es.eigenvalues();  // ascending
}

double exact_gap(const DiscretizedKernel& dk) {
  const Eigen::VectorXd ev = symmetrized_spectrum(dk);
  const Eigen::Index n = ev.size();

  constexpr double kUnitTol = 1e-9;
  int unit_count = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev[i] >= 1.0 - kUnitTol) ++unit_count;
  }
  if (unit_count != 1) {
    std::ostringstream msg;
    msg << "exact_gap: " << unit_count
        << " eigenvalues within 1e-9 of 1 (reducible or disconnected chain)";
    throw ReducibilityError(msg.str());
  }

  double lambda2 = -1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev[i] < 1.0 - kUnitTol) lambda2 = std::max(lambda2, ev[i]);
  }
  return std::clamp(1.0 - lambda2, 0.0, 2.0);
}

OracleComparison oracle_vs_estimate(const CompositePotential& pot,
                                    const KernelSpec& kernel, int n, double R,
                                    const Eigen::VectorXd& x0, int n_steps,
                                    int burn_in, std::uint64_t seed) {
  if (pot.dim != 1) {
    throw InvalidInputError("oracle_vs_estimate: only d = 1 is supported");
  }
  OracleComparison cmp;
  cmp.oracle_gap = exact_gap(discretize_kernel(pot, kernel, n, R));

  const ChainResult chain =
      run_chain(pot, kernel, x0, n_steps, burn_in, seed);
  const TestFunctionSuite suite = TestFunctionSuite::standard(
      pot, TestFunctionSuite::draw_probe(pot.dim, derive_seed(seed, 7)));
  cmp.estimated_gap = estimate_gap(chain, suite).gap_estimate;
  cmp.rel_error = std::abs(cmp.estimated_gap - cmp.oracle_gap) /
                  std::abs(cmp.oracle_gap);
  return cmp;
}

}  // namespace nsgap
