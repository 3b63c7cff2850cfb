#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "tsstss/linsolve.hpp"
#include "tsstss/rng.hpp"

using namespace tsstss;

namespace {
SolverConfig defaults() { return SolverConfig{}; }
}  // namespace

TEST_CASE("lasso on orthonormal design reduces to soft thresholding") {
  Eigen::MatrixXd dict = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2);
  y << 3.0, 0.5;
  SolverConfig cfg = defaults();
  cfg.l1_penalty = 1.0;
  Eigen::VectorXd theta = solve_lasso(dict, y, cfg);
  CHECK(theta[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(theta[1] == 0.0);
  CHECK(kkt_violation(dict, y, theta, 1.0) <= 1e-12);
}

TEST_CASE("alpha above max correlation gives the exact zero solution") {
  SeededRng rng(1);
  Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 6, 10);
  Eigen::VectorXd y = oracles::random_vector(rng, 6);
  const double alpha = (dict.transpose() * y).cwiseAbs().maxCoeff();
  SolverConfig cfg = defaults();
  cfg.l1_penalty = alpha + 1e-9;
  Eigen::VectorXd theta = solve_lasso(dict, y, cfg);
  CHECK(theta.isZero(0.0));
  CHECK(kkt_violation(dict, y, theta, cfg.l1_penalty) == 0.0);
}

TEST_CASE("lasso matches the proximal-gradient oracle on a random problem") {
  SeededRng rng(2);
  Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 10, 20);
  Eigen::VectorXd y = oracles::random_vector(rng, 10);
  SolverConfig cfg = defaults();
  cfg.l1_penalty = 0.1;
  Eigen::VectorXd theta = solve_lasso(dict, y, cfg);
  Eigen::VectorXd ref = oracles::lasso_prox_gradient(dict, y, 0.1);
  CHECK((theta - ref).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("kkt_violation formula cases") {
  SeededRng rng(3);
  Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 5, 8);
  Eigen::VectorXd y = oracles::random_vector(rng, 5);
  const double max_corr = (dict.transpose() * y).cwiseAbs().maxCoeff();
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(8);

  SUBCASE("zero optimal when alpha dominates") {
    CHECK(kkt_violation(dict, y, zero, max_corr + 0.5) == 0.0);
  }
  SUBCASE("zero suboptimal otherwise") {
    const double alpha = max_corr / 2;
    CHECK(kkt_violation(dict, y, zero, alpha) ==
          doctest::Approx(max_corr - alpha).epsilon(1e-12));
  }
}

TEST_CASE("lasso KKT violation stays within 10x tolerance on random problems") {
  SeededRng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index d = 3 + rng.next_below(15);
    const Eigen::Index m = 3 + rng.next_below(25);
    Eigen::MatrixXd dict = oracles::random_unit_dict(rng, d, m);
    Eigen::VectorXd y = oracles::random_vector(rng, d);
    SolverConfig cfg = defaults();
    cfg.l1_penalty = 0.05;
    Eigen::VectorXd theta = solve_lasso(dict, y, cfg);
    CHECK(kkt_violation(dict, y, theta, cfg.l1_penalty) <= 10 * cfg.tolerance);
  }
}

TEST_CASE("lasso errors") {
  Eigen::MatrixXd dict = Eigen::MatrixXd::Identity(3, 3);
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(solve_lasso(dict, Eigen::VectorXd::Zero(2), defaults()),
                    InvalidInput);
    CHECK_THROWS_AS(
        kkt_violation(dict, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2), 1.0),
        InvalidInput);
  }
  SUBCASE("non-convergence carries the last iterate") {
    SeededRng rng(5);
    Eigen::MatrixXd hard = oracles::random_unit_dict(rng, 8, 40);
    Eigen::VectorXd y = oracles::random_vector(rng, 8);
    SolverConfig cfg = defaults();
    cfg.l1_penalty = 1e-4;
    cfg.tolerance = 1e-15;
    cfg.max_iterations = 2;
    try {
      solve_lasso(hard, y, cfg);
      FAIL("expected NotConverged");
    } catch (const NotConverged& e) {
      CHECK(e.last_iterate().size() == 40);
      CHECK(e.violation() >= 0.0);
    }
  }
  SUBCASE("invalid config") {
    SolverConfig cfg = defaults();
    cfg.l1_penalty = 0.0;
    CHECK_THROWS_AS(solve_lasso(dict, Eigen::VectorXd::Zero(3), cfg),
                    InvalidInput);
  }
}

TEST_CASE("ridge closed form on the identity dictionary") {
  Eigen::MatrixXd dict = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd y(2);
  y << 2.0, 0.0;
  Eigen::VectorXd w = solve_ridge(dict, y, 1.0);
  CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ridge approaches least squares as the penalty vanishes") {
  SeededRng rng(6);
  // Orthonormal square dictionary via QR.
  Eigen::MatrixXd raw = oracles::random_unit_dict(rng, 6, 6);
  Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ();
  Eigen::VectorXd y = oracles::random_vector(rng, 6);
  Eigen::VectorXd w = solve_ridge(q, y, 1e-10);
  CHECK((w - q.transpose() * y).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("ridge matches the gradient-descent oracle") {
  SeededRng rng(7);
  Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 5, 8);
  Eigen::VectorXd y = oracles::random_vector(rng, 5);
  Eigen::VectorXd w = solve_ridge(dict, y, 0.1);
  Eigen::VectorXd ref = oracles::ridge_gradient_descent(dict, y, 0.1);
  CHECK((w - ref).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("ridge normal-equation identity and linearity in the query") {
  SeededRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index d = 3 + rng.next_below(10);
    const Eigen::Index m = 3 + rng.next_below(14);
    Eigen::MatrixXd dict = oracles::random_unit_dict(rng, d, m);
    Eigen::VectorXd y1 = oracles::random_vector(rng, d);
    Eigen::VectorXd y2 = oracles::random_vector(rng, d);
    const double lambda = 0.05;

    Eigen::VectorXd w1 = solve_ridge(dict, y1, lambda);
    Eigen::VectorXd identity_gap =
        dict.transpose() * (y1 - dict * w1) - lambda * w1;
    CHECK(identity_gap.cwiseAbs().maxCoeff() <= 1e-8);

    Eigen::VectorXd combined = solve_ridge(dict, 2.0 * y1 - 0.5 * y2, lambda);
    Eigen::VectorXd sum = 2.0 * w1 - 0.5 * solve_ridge(dict, y2, lambda);
    CHECK((combined - sum).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("solvers are bit-deterministic") {
  SeededRng rng(9);
  Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 7, 12);
  Eigen::VectorXd y = oracles::random_vector(rng, 7);
  SolverConfig cfg = defaults();
  Eigen::VectorXd a = solve_lasso(dict, y, cfg);
  Eigen::VectorXd b = solve_lasso(dict, y, cfg);
  CHECK(a == b);
  CHECK(solve_ridge(dict, y, 0.3) == solve_ridge(dict, y, 0.3));
}

TEST_CASE("ridge projector agrees with per-query solves") {
  SUBCASE("identity dictionary halves inputs") {
    RidgeProjector p(Eigen::MatrixXd::Identity(2, 2), 1.0);
    Eigen::VectorXd y(2);
    y << 2.0, 0.0;
    Eigen::VectorXd w = p.apply(y);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("projector vs solve_ridge on the dictionary columns") {
    SeededRng rng(10);
    Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 6, 9);
    RidgeProjector p(dict, 0.2);
    for (Eigen::Index j = 0; j < dict.cols(); ++j) {
      Eigen::VectorXd direct = solve_ridge(dict, dict.col(j), 0.2);
      CHECK((p.apply(dict.col(j)) - direct).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("random 8x12 dictionary with 50 random queries") {
    SeededRng rng(11);
    Eigen::MatrixXd dict = oracles::random_unit_dict(rng, 8, 12);
    RidgeProjector p(dict, 0.1);
    for (int i = 0; i < 50; ++i) {
      Eigen::VectorXd y = oracles::random_vector(rng, 8);
      CHECK((p.apply(y) - solve_ridge(dict, y, 0.1)).cwiseAbs().maxCoeff() <=
            1e-10);
    }
  }
  SUBCASE("mismatched query") {
    RidgeProjector p(Eigen::MatrixXd::Identity(3, 3), 1.0);
    CHECK_THROWS_AS(p.apply(Eigen::VectorXd::Zero(2)), InvalidInput);
  }
}
