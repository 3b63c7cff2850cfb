#ifndef TSSTSS_REPRESENT_HPP_
#define TSSTSS_REPRESENT_HPP_

#include <vector>

#include <Eigen/Core>

#include "tsstss/errors.hpp"
#include "tsstss/linsolve.hpp"

namespace tsstss {

// Labeled sample collection, samples as columns. Immutable once built.
struct Dataset {
  Eigen::MatrixXd features;  // d x m
  std::vector<int> labels;   // one per column

  // Class partition, ids ascending. class_columns[c] lists the column
  // indices of class class_ids[c] in ascending order.
  std::vector<int> class_ids;
  std::vector<std::vector<Eigen::Index>> class_columns;

  Eigen::Index dim() const { return features.rows(); }
  Eigen::Index count() const { return features.cols(); }
  int num_classes() const { return static_cast<int>(class_ids.size()); }

  // Position of a class id in class_ids, or -1.
  int class_index(int class_id) const;

  // Validates and builds the class partition.
  static Dataset build(Eigen::MatrixXd features, std::vector<int> labels);

  // Columns of the given classes only, original column order preserved.
  Dataset subset_classes(const std::vector<int>& keep_class_ids) const;
};

// Per-class reconstruction errors, indexed like Dataset::class_ids.
// `squared` distinguishes the squared-norm deviation form used for candidate
// selection from the plain-norm form the scores are built on.
struct ResidualVector {
  std::vector<int> class_ids;
  Eigen::VectorXd values;
  bool squared = false;
};

// Result of one residual-scored classification.
struct LabeledVerdict {
  int label = -1;
  ResidualVector residuals;    // unsquared
  Eigen::VectorXd scores;      // same class order as residuals
  Eigen::VectorXd coefficients;
};

// For each class, the reconstruction error of `query` using only that
// class's columns and coefficients.
ResidualVector class_residuals(const Eigen::VectorXd& coeffs,
                               const Dataset& data,
                               const Eigen::VectorXd& query, bool squared);

// score_j = mean(residuals) - residual_j. Order-reversing affine map, so
// argmax score == argmin residual and the scores sum to zero.
Eigen::VectorXd confidence_scores(const ResidualVector& residuals);

// Sparse-representation classifier: L1 code over the full dictionary,
// label = class with the smallest class-restricted residual.
LabeledVerdict classify_src(const Dataset& data, const Eigen::VectorXd& query,
                            const SolverConfig& cfg);

// Collaborative-representation classifier: closed-form L2 code, same
// residual rule. The projector, if given, must be built from data.features
// with the same penalty.
LabeledVerdict classify_crc(const Dataset& data, const Eigen::VectorXd& query,
                            double l2_penalty,
                            const RidgeProjector* projector = nullptr);

// Majority vote over the k nearest columns (Euclidean); ties by ascending
// class id.
int classify_knn(const Dataset& data, const Eigen::VectorXd& query, int k);

// argmax with ties broken by the lowest index (class order is ascending, so
// this is the ascending-class-id rule).
Eigen::Index argmax_index(const Eigen::VectorXd& v);

}  // namespace tsstss

#endif  // TSSTSS_REPRESENT_HPP_
