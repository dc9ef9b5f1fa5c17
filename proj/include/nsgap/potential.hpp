#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Core>

namespace nsgap {

/// A target distribution whose log-density splits as log pi = f + g, with f
/// gradient-Lipschitz (constant M) and g globally Lipschitz (constant L) but
/// possibly non-differentiable. All densities are handled in log space up to
/// an additive constant; the normalizer is never needed.
///
/// `nonsmooth_subgrad` returns the minimal-norm element of the
/// superdifferential of g, which is the zero vector at l1 kinks. Evaluations
/// are pure functions of (potential, point) and safe to call concurrently.
struct CompositePotential {
  int dim = 0;
  std::function<double(const Eigen::VectorXd&)> log_density;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> smooth_grad;
  std::function<double(const Eigen::VectorXd&)> nonsmooth_value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> nonsmooth_subgrad;
  double smoothness_M = 0.0;
  double lipschitz_L = 0.0;
  std::optional<double> strong_concavity_m;
  bool f_concave = false;
};

/// Bayesian Lasso posterior inputs: log pi(x) = -1/2 |Ax-y|^2 - lambda |x|_1.
struct LassoModel {
  Eigen::MatrixXd design_A;
  Eigen::VectorXd observation_y;
  double reg_lambda = 0.0;
};

/// Logistic regression with Laplace prior; `true_coef` is generator metadata.
struct LogisticModel {
  Eigen::MatrixXd features;  // rows a_i
  Eigen::VectorXi labels;    // in {0, 1}
  double reg_lambda = 0.0;
  Eigen::VectorXd true_coef;
};

/// Full drift smooth_grad(x) + nonsmooth_subgrad(x). Throws InvalidInputError
/// on non-finite input.
Eigen::VectorXd drift_vector(const CompositePotential& pot,
                             const Eigen::VectorXd& x);

/// Builds the Bayesian Lasso potential. Rank-deficient A drops the strong
/// concavity metadata with a warning on stderr; the target stays log-concave.
CompositePotential make_bayesian_lasso(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& y,
                                       double lambda);

/// Design matrix A = Sigma V^T with Sigma = diag(i^-alpha) and V a random
/// orthogonal matrix (QR of a Gaussian matrix, R-diagonal signs absorbed into
/// Q so V follows the orthogonal-invariant distribution). Deterministic per
/// seed; A^T A has eigenvalues {i^-2alpha}.
Eigen::MatrixXd lasso_design_matrix(int d, double alpha_decay,
                                    std::uint64_t seed);

/// Bayesian logistic regression with Laplace prior:
///   f(x) = -sum_i [log(1 + exp(a_i.x)) - y_i a_i.x],  g(x) = -lambda |x|_1.
/// smoothness_M = 1/4 lambda_max(sum a_i a_i^T). Throws on labels outside
/// {0, 1}.
CompositePotential make_logistic_laplace(const Eigen::MatrixXd& features,
                                         const Eigen::VectorXi& labels,
                                         double lambda);

/// Synthetic logistic dataset: Gaussian features, sparse Gaussian true
/// coefficient (ceil(sparsity*d) nonzeros at uniform positions), Bernoulli
/// labels through the sigmoid. Deterministic per seed.
LogisticModel synth_logistic_data(int n, int d, double sparsity,
                                  std::uint64_t seed);

/// Standard Gaussian N(0, I_d): f = -1/2 |x|^2, g = 0, M = m = 1, L = 0.
CompositePotential make_std_gaussian(int d);

/// Numerically stable log(1 + exp(t)), valid for |t| up to ~700.
double log1pexp(double t);

}  // namespace nsgap
