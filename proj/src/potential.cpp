#include "nsgap/potential.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "nsgap/errors.hpp"
#include "nsgap/rng.hpp"

namespace nsgap {

namespace {

void require_finite(const Eigen::VectorXd& x, const char* what) {
  if (!x.allFinite()) {
    throw InvalidInputError(std::string(what) + ": non-finite component");
  }
}

// Minimal-norm element of the superdifferential of g(x) = -lambda |x|_1:
// -lambda sign(x_i) off the kink, 0 on it.
Eigen::VectorXd l1_min_norm_subgrad(const Eigen::VectorXd& x, double lambda) {
  Eigen::VectorXd v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    v[i] = x[i] > 0.0 ? -lambda : (x[i] < 0.0 ? lambda : 0.0);
  }
  return v;
}

}  // namespace

double log1pexp(double t) {
  // Branch-stable form: for t > 0 write t + log(1 + exp(-t)).
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

Eigen::VectorXd drift_vector(const CompositePotential& pot,
                             const Eigen::VectorXd& x) {
  require_finite(x, "drift_vector");
  return pot.smooth_grad(x) + pot.nonsmooth_subgrad(x);
}

CompositePotential make_bayesian_lasso(const Eigen::MatrixXd& A,
                                       const Eigen::VectorXd& y,
                                       double lambda) {
  if (A.rows() != A.cols()) {
    throw InvalidInputError("make_bayesian_lasso: A must be square");
  }
  if (A.rows() != y.size()) {
    throw InvalidInputError("make_bayesian_lasso: dimension mismatch A vs y");
  }
  if (lambda < 0.0) {
    throw InvalidInputError("make_bayesian_lasso: lambda must be >= 0");
  }
  const int d = static_cast<int>(A.rows());

  auto shared_A = std::make_shared<const Eigen::MatrixXd>(A);
  auto shared_y = std::make_shared<const Eigen::VectorXd>(y);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A);
  const double eig_max = es.eigenvalues().maxCoeff();
  const double eig_min = es.eigenvalues().minCoeff();

  CompositePotential pot;
  pot.dim = d;
  pot.smoothness_M = eig_max;
  pot.lipschitz_L = lambda * std::sqrt(static_cast<double>(d));
  pot.f_concave = true;
  if (eig_min > 1e-12 * std::max(eig_max, 1.0)) {
    pot.strong_concavity_m = eig_min;
  } else {
    std::cerr << "nsgap: warning: rank-deficient Lasso design, target is "
                 "log-concave but not strongly log-concave\n";
  }
  pot.log_density = [shared_A, shared_y, lambda](const Eigen::VectorXd& x) {
    return -0.5 * (*shared_A * x - *shared_y).squaredNorm() -
           lambda * x.lpNorm<1>();
  };
  pot.smooth_grad = [shared_A, shared_y](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-shared_A->transpose() * (*shared_A * x - *shared_y));
  };
  pot.nonsmooth_value = [lambda](const Eigen::VectorXd& x) {
    return -lambda * x.lpNorm<1>();
  };
  pot.nonsmooth_subgrad = [lambda](const Eigen::VectorXd& x) {
    return l1_min_norm_subgrad(x, lambda);
  };
  return pot;
}

Eigen::MatrixXd lasso_design_matrix(int d, double alpha_decay,
                                    std::uint64_t seed) {
  if (d < 1) throw InvalidInputError("lasso_design_matrix: d must be >= 1");
  if (alpha_decay <= 0.0) {
    throw InvalidInputError("lasso_design_matrix: alpha_decay must be > 0");
  }
  SplitMix64 rng(seed);
  Eigen::MatrixXd G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  // Absorbing the R-diagonal signs into Q makes the factorization unique and
  // Q Haar-distributed on the orthogonal group.
  for (int j = 0; j < d; ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }

  Eigen::VectorXd sigma(d);
  for (int i = 0; i < d; ++i) {
    sigma[i] = std::pow(static_cast<double>(i + 1), -alpha_decay);
  }
  return sigma.asDiagonal() * Q.transpose();
}

CompositePotential make_logistic_laplace(const Eigen::MatrixXd& features,
                                         const Eigen::VectorXi& labels,
                                         double lambda) {
  if (features.rows() != labels.size()) {
    throw InvalidInputError(
        "make_logistic_laplace: feature/label count mismatch");
  }
  if (!features.allFinite()) {
    throw InvalidInputError("make_logistic_laplace: non-finite feature");
  }
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidInputError("make_logistic_laplace: label outside {0,1}");
    }
  }
  if (lambda < 0.0) {
    throw InvalidInputError("make_logistic_laplace: lambda must be >= 0");
  }
  const int d = static_cast<int>(features.cols());

  auto shared_F = std::make_shared<const Eigen::MatrixXd>(features);
  auto shared_y =
      std::make_shared<const Eigen::VectorXd>(labels.cast<double>());

  // Logistic curvature is sigma'(t) <= 1/4, so the Hessian of -f is bounded
  // by 1/4 sum a_i a_i^T.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(features.transpose() *
                                                    features);
  const double curvature = 0.25 * es.eigenvalues().maxCoeff();

  CompositePotential pot;
  pot.dim = d;
  pot.smoothness_M = curvature;
  pot.lipschitz_L = lambda * std::sqrt(static_cast<double>(d));
  pot.f_concave = true;
  pot.strong_concavity_m = std::nullopt;  // log-concave, not strongly

  pot.log_density = [shared_F, shared_y, lambda](const Eigen::VectorXd& x) {
    const Eigen::VectorXd t = *shared_F * x;
    double f = 0.0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      f -= log1pexp(t[i]) - (*shared_y)[i] * t[i];
    }
    return f - lambda * x.lpNorm<1>();
  };
  pot.smooth_grad = [shared_F, shared_y](const Eigen::VectorXd& x) {
    const Eigen::VectorXd t = *shared_F * x;
    Eigen::VectorXd w(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      const double sigma = 1.0 / (1.0 + std::exp(-t[i]));
      w[i] = (*shared_y)[i] - sigma;
    }
    return Eigen::VectorXd(shared_F->transpose() * w);
  };
  pot.nonsmooth_value = [lambda](const Eigen::VectorXd& x) {
    return -lambda * x.lpNorm<1>();
  };
  pot.nonsmooth_subgrad = [lambda](const Eigen::VectorXd& x) {
    return l1_min_norm_subgrad(x, lambda);
  };
  return pot;
}

LogisticModel synth_logistic_data(int n, int d, double sparsity,
                                  std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw InvalidInputError("synth_logistic_data: N, d must be >= 1");
  }
  if (sparsity <= 0.0 || sparsity > 1.0) {
    throw InvalidInputError("synth_logistic_data: sparsity must be in (0,1]");
  }
  SplitMix64 rng(seed);

  LogisticModel model;
  model.features.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) model.features(i, j) = rng.normal();

  const int n_nonzero = static_cast<int>(
      std::ceil(sparsity * static_cast<double>(d)));
  // Partial Fisher-Yates picks the support uniformly at random.
  std::vector<int> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < n_nonzero; ++k) {
    const int j =
        k + static_cast<int>(rng.next() % static_cast<std::uint64_t>(d - k));
    std::swap(idx[k], idx[j]);
  }
  model.true_coef = Eigen::VectorXd::Zero(d);
  for (int k = 0; k < n_nonzero; ++k) model.true_coef[idx[k]] = rng.normal();

  model.labels.resize(n);
  for (int i = 0; i < n; ++i) {
    const double p =
        1.0 / (1.0 + std::exp(-model.features.row(i).dot(model.true_coef)));
    model.labels[i] = rng.uniform01() < p ? 1 : 0;
  }
  return model;
}

CompositePotential make_std_gaussian(int d) {
  if (d < 1) throw InvalidInputError("make_std_gaussian: d must be >= 1");
  CompositePotential pot;
  pot.dim = d;
  pot.smoothness_M = 1.0;
  pot.lipschitz_L = 0.0;
  pot.strong_concavity_m = 1.0;
  pot.f_concave = true;
  pot.log_density = [](const Eigen::VectorXd& x) {
    return -0.5 * x.squaredNorm();
  };
  pot.smooth_grad = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(-x);
  };
  pot.nonsmooth_value = [](const Eigen::VectorXd&) { return 0.0; };
  pot.nonsmooth_subgrad = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd(Eigen::VectorXd::Zero(x.size()));
  };
  return pot;
}

}  // namespace nsgap
