// Independent reference implementations used only by tests. These stay on
// deliberately different algorithmic routes from the library solvers.

#ifndef TSSTSS_TESTS_ORACLES_HPP_
#define TSSTSS_TESTS_ORACLES_HPP_

#include <cmath>

#include <Eigen/Dense>

#include "tsstss/represent.hpp"
#include "tsstss/rng.hpp"

namespace oracles {

// Plain proximal gradient (ISTA) with step 1/L, L = largest Gram eigenvalue.
// Runs max_iters steps, stopping early only once the iterate is bit-exactly
// stationary (further steps would be the identity).
inline Eigen::VectorXd lasso_prox_gradient(const Eigen::MatrixXd& dict,
                                           const Eigen::VectorXd& query,
                                           double alpha,
                                           long max_iters = 1000000) {
  const Eigen::MatrixXd gram = dict.transpose() * dict;
  const Eigen::VectorXd corr = dict.transpose() * query;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double lipschitz = eig.eigenvalues().maxCoeff();
  const double step = 1.0 / lipschitz;
  const double thresh = step * alpha;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dict.cols());
  for (long it = 0; it < max_iters; ++it) {
    Eigen::VectorXd z = theta - step * (gram * theta - corr);
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (z[j] > thresh)
        z[j] -= thresh;
      else if (z[j] < -thresh)
        z[j] += thresh;
      else
        z[j] = 0.0;
    }
    if (z == theta) break;  // exact fixed point
    theta = std::move(z);
  }
  return theta;
}

// Gradient descent on ||y - X w||^2 + lambda ||w||^2 run to the given
// gradient norm.
inline Eigen::VectorXd ridge_gradient_descent(const Eigen::MatrixXd& dict,
                                              const Eigen::VectorXd& query,
                                              double lambda,
                                              double grad_norm_tol = 1e-12,
                                              long max_iters = 10000000) {
  const Eigen::MatrixXd gram = dict.transpose() * dict;
  const Eigen::VectorXd corr = dict.transpose() * query;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double step = 1.0 / (2.0 * (eig.eigenvalues().maxCoeff() + lambda));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(dict.cols());
  for (long it = 0; it < max_iters; ++it) {
    Eigen::VectorXd grad = 2.0 * (gram * w - corr + lambda * w);
    if (grad.norm() <= grad_norm_tol) break;
    w -= step * grad;
  }
  return w;
}

// Nearest-subspace classifier: orthogonal projection of the query onto the
// span of each class's training columns; smallest residual wins (ties by
// ascending class id).
inline int nearest_subspace_classify(const tsstss::Dataset& train,
                                     const Eigen::VectorXd& query) {
  int best_class = train.class_ids[0];
  double best_residual = std::numeric_limits<double>::infinity();
  for (int c = 0; c < train.num_classes(); ++c) {
    const auto& cols = train.class_columns[c];
    Eigen::MatrixXd sub(train.dim(), cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
      sub.col(i) = train.features.col(cols[i]);
    Eigen::VectorXd coeff =
        sub.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(query);
    const double residual = (query - sub * coeff).norm();
    if (residual < best_residual) {
      best_residual = residual;
      best_class = train.class_ids[c];
    }
  }
  return best_class;
}

// Random dictionary with unit-norm columns.
inline Eigen::MatrixXd random_unit_dict(tsstss::SeededRng& rng,
                                        Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.next_gaussian();
    m.col(j).normalize();
  }
  return m;
}

inline Eigen::VectorXd random_vector(tsstss::SeededRng& rng, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.next_gaussian();
  return v;
}

}  // namespace oracles

#endif  // TSSTSS_TESTS_ORACLES_HPP_
