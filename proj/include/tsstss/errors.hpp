#ifndef TSSTSS_ERRORS_HPP_
#define TSSTSS_ERRORS_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace tsstss {

// Bad argument: dimension mismatch, out-of-range parameter, invalid config.
class InvalidInput : public std::runtime_error {
 public:
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (IDX magic, CSV shape, truncation, ...).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative solver ran out of iterations. Carries the last iterate and the
// optimality-violation magnitude at that point.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, Eigen::VectorXd last_iterate,
               double violation)
      : std::runtime_error(what),
        last_iterate_(std::move(last_iterate)),
        violation_(violation) {}

  const Eigen::VectorXd& last_iterate() const { return last_iterate_; }
  double violation() const { return violation_; }

 private:
  Eigen::VectorXd last_iterate_;
  double violation_;
};

// Factorization or other numerical breakdown.
class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace tsstss

#endif  // TSSTSS_ERRORS_HPP_
