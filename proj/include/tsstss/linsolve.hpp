#ifndef TSSTSS_LINSOLVE_HPP_
#define TSSTSS_LINSOLVE_HPP_

#include <Eigen/Core>

#include "tsstss/errors.hpp"

namespace tsstss {

// Parameters shared by the two coding problems. alpha weights the L1 term
// of the sparse code, lambda the ridge term of the collaborative code.
struct SolverConfig {
  double l1_penalty = 0.01;
  double l2_penalty = 1e-3;
  double tolerance = 1e-7;     // max coefficient change per sweep
  int max_iterations = 10000;  // full coordinate sweeps

  void validate() const;
};

// min_theta  1/2 ||y - X theta||^2 + alpha ||theta||_1
// Cyclic coordinate descent with soft thresholding. After each full sweep the
// active (nonzero) coordinates are iterated to convergence before the next
// full sweep. Converged when a full sweep changes no coefficient by more than
// cfg.tolerance. Throws NotConverged after cfg.max_iterations sweeps.
Eigen::VectorXd solve_lasso(const Eigen::MatrixXd& dict,
                            const Eigen::VectorXd& query,
                            const SolverConfig& cfg);

// First-order optimality certificate for the lasso problem. With
// g = -X^T (y - X theta), returns the max over coordinates of
//   |g_j + alpha * sign(theta_j)|   where theta_j != 0
//   max(0, |g_j| - alpha)           where theta_j == 0
// Zero at an exact optimum.
double kkt_violation(const Eigen::MatrixXd& dict, const Eigen::VectorXd& query,
                     const Eigen::VectorXd& theta, double alpha);

// min_w ||y - X w||^2 + lambda ||w||^2, closed form
// w = (X^T X + lambda I)^-1 X^T y via Cholesky.
Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& dict,
                            const Eigen::VectorXd& query, double l2_penalty);

// Precomputed ridge solution operator P = (X^T X + lambda I)^-1 X^T.
// Immutable after construction; applying it matches solve_ridge on the same
// dictionary to ~1e-10.
class RidgeProjector {
 public:
  RidgeProjector(const Eigen::MatrixXd& dict, double l2_penalty);

  Eigen::VectorXd apply(const Eigen::VectorXd& query) const;

  const Eigen::MatrixXd& matrix() const { return projection_; }

 private:
  Eigen::MatrixXd projection_;  // m x d
};

}  // namespace tsstss

#endif  // TSSTSS_LINSOLVE_HPP_
