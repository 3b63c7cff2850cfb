#include "tsstss/linsolve.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

namespace tsstss {

void SolverConfig::validate() const {
  if (!(l1_penalty > 0)) throw InvalidInput("SolverConfig: l1_penalty must be > 0");
  if (!(l2_penalty > 0)) throw InvalidInput("SolverConfig: l2_penalty must be > 0");
  if (!(tolerance > 0)) throw InvalidInput("SolverConfig: tolerance must be > 0");
  if (max_iterations < 1)
    throw InvalidInput("SolverConfig: max_iterations must be >= 1");
}

namespace {

double soft_threshold(double z, double alpha) {
  if (z > alpha) return z - alpha;
  if (z < -alpha) return z + alpha;
  return 0.0;  // ties at |z| == alpha map to 0
}

void check_dims(const Eigen::MatrixXd& dict, const Eigen::VectorXd& query,
                const char* who) {
  if (dict.rows() < 1 || dict.cols() < 1)
    throw InvalidInput(std::string(who) + ": empty dictionary");
  if (query.size() != dict.rows())
    throw InvalidInput(std::string(who) + ": query length " +
                       std::to_string(query.size()) + " != dictionary rows " +
                       std::to_string(dict.rows()));
}

// One pass of coordinate updates over `order`; returns the max coefficient
// change. Maintains the residual r = y - X theta incrementally.
double sweep(const Eigen::MatrixXd& dict, const Eigen::VectorXd& col_sq_norms,
             double alpha, const std::vector<Eigen::Index>& order,
             Eigen::VectorXd& theta, Eigen::VectorXd& residual) {
  double max_change = 0.0;
  for (Eigen::Index j : order) {
    const double nj = col_sq_norms[j];
    if (nj == 0.0) continue;
    const double old = theta[j];
    const double z = dict.col(j).dot(residual) + nj * old;
    const double updated = soft_threshold(z, alpha) / nj;
    if (updated != old) {
      residual += dict.col(j) * (old - updated);
      theta[j] = updated;
      max_change = std::max(max_change, std::abs(updated - old));
    }
  }
  return max_change;
}

}  // namespace

Eigen::VectorXd solve_lasso(const Eigen::MatrixXd& dict,
                            const Eigen::VectorXd& query,
                            const SolverConfig& cfg) {
  check_dims(dict, query, "solve_lasso");
  cfg.validate();

  const Eigen::Index m = dict.cols();
  const double alpha = cfg.l1_penalty;
  const Eigen::VectorXd col_sq_norms = dict.colwise().squaredNorm();

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd residual = query;

  std::vector<Eigen::Index> all(m);
  for (Eigen::Index j = 0; j < m; ++j) all[j] = j;

  // Iteration budget in full-sweep units; a pass over the active set of size
  // a costs a/m of a sweep.
  double work = 0.0;
  while (work < cfg.max_iterations) {
    const double change = sweep(dict, col_sq_norms, alpha, all, theta, residual);
    work += 1.0;
    if (change < cfg.tolerance) return theta;

    // Iterate the current support to convergence; the full sweep above
    // re-checks the inactive coordinates afterwards.
    std::vector<Eigen::Index> active;
    for (Eigen::Index j = 0; j < m; ++j)
      if (theta[j] != 0.0) active.push_back(j);
    const double active_cost =
        static_cast<double>(active.size()) / static_cast<double>(m);
    while (work < cfg.max_iterations && !active.empty()) {
      const double inner =
          sweep(dict, col_sq_norms, alpha, active, theta, residual);
      work += active_cost;
      if (inner < cfg.tolerance) break;
    }
  }
  throw NotConverged(
      "solve_lasso: no convergence in " + std::to_string(cfg.max_iterations) +
          " sweeps",
      theta, kkt_violation(dict, query, theta, alpha));
}

double kkt_violation(const Eigen::MatrixXd& dict, const Eigen::VectorXd& query,
                     const Eigen::VectorXd& theta, double alpha) {
  check_dims(dict, query, "kkt_violation");
  if (theta.size() != dict.cols())
    throw InvalidInput("kkt_violation: theta length != dictionary cols");
  const Eigen::VectorXd grad = -dict.transpose() * (query - dict * theta);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    double v;
    if (theta[j] > 0)
      v = std::abs(grad[j] + alpha);
    else if (theta[j] < 0)
      v = std::abs(grad[j] - alpha);
    else
      v = std::max(0.0, std::abs(grad[j]) - alpha);
    worst = std::max(worst, v);
  }
  return worst;
}

Eigen::VectorXd solve_ridge(const Eigen::MatrixXd& dict,
                            const Eigen::VectorXd& query, double l2_penalty) {
  check_dims(dict, query, "solve_ridge");
  if (!(l2_penalty > 0)) throw InvalidInput("solve_ridge: l2_penalty must be > 0");

  const Eigen::Index m = dict.cols();
  Eigen::MatrixXd gram = dict.transpose() * dict;
  gram.diagonal().array() += l2_penalty;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("solve_ridge: Cholesky factorization failed");
  return llt.solve(dict.transpose() * query);
}

RidgeProjector::RidgeProjector(const Eigen::MatrixXd& dict, double l2_penalty) {
  if (dict.rows() < 1 || dict.cols() < 1)
    throw InvalidInput("RidgeProjector: empty dictionary");
  if (!(l2_penalty > 0))
    throw InvalidInput("RidgeProjector: l2_penalty must be > 0");

  Eigen::MatrixXd gram = dict.transpose() * dict;
  gram.diagonal().array() += l2_penalty;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw NumericalFailure("RidgeProjector: Cholesky factorization failed");
  projection_ = llt.solve(dict.transpose());
}

Eigen::VectorXd RidgeProjector::apply(const Eigen::VectorXd& query) const {
  if (query.size() != projection_.cols())
    throw InvalidInput("RidgeProjector::apply: query length " +
                       std::to_string(query.size()) + " != feature dim " +
                       std::to_string(projection_.cols()));
  return projection_ * query;
}

}  // namespace tsstss
