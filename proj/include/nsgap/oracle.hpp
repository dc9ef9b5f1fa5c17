#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "nsgap/potential.hpp"
#include "nsgap/sampler.hpp"

namespace nsgap {

/// Metropolis kernel restricted to a uniform midpoint grid on [-R, R].
/// Off-diagonal mass is alpha(x_i, x_j) Q(x_i, x_j) w; the rejection mass sits
/// on the diagonal, so every row sums to one and detailed balance with the
/// discretized stationary vector holds up to quadrature symmetry.
struct DiscretizedKernel {
  Eigen::VectorXd grid;     // n cell centers, sorted
  double cell_width = 0.0;  // 2R/n
  Eigen::MatrixXd transition;
  Eigen::VectorXd stationary;  // proportional to pi(x_i) w, normalized
};

/// Builds the discretized kernel for a one-dimensional target. Throws
/// InsufficientDomainError when the stationary-weighted proposal mass leaking
/// outside [-R, R] exceeds 1e-6 (the grid cannot represent the chain).
/// Choose R to cover at least ~8 target standard deviations.
DiscretizedKernel discretize_kernel(const CompositePotential& pot,
                                    const KernelSpec& kernel, int n, double R);

/// Ascending real spectrum of the similarity transform D^{1/2} P D^{-1/2}
/// (D = diag(stationary)), which reversibility makes symmetric. All
/// eigenvalues lie in [-1, 1] up to round-off.
Eigen::VectorXd symmetrized_spectrum(const DiscretizedKernel& dk);

/// Spectral gap 1 - lambda_2 of the discretized kernel, where lambda_2 is the
/// largest eigenvalue strictly below 1 (tolerance 1e-9 for the unit
/// eigenvalue). Throws ReducibilityError when more than one eigenvalue sits
/// within 1e-9 of 1.
double exact_gap(const DiscretizedKernel& dk);

struct OracleComparison {
  double oracle_gap = 0.0;
  double estimated_gap = 0.0;
  double rel_error = 0.0;
};

/// Runs the IACT pipeline on a chain for the same 1-d target and compares
/// against the discretized-kernel eigenvalue gap.
OracleComparison oracle_vs_estimate(const CompositePotential& pot,
                                    const KernelSpec& kernel, int n, double R,
                                    const Eigen::VectorXd& x0, int n_steps,
                                    int burn_in, std::uint64_t seed);

}  // namespace nsgap
