#include "tsstss/represent.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace tsstss {

int Dataset::class_index(int class_id) const {
  auto it = std::lower_bound(class_ids.begin(), class_ids.end(), class_id);
  if (it == class_ids.end() || *it != class_id) return -1;
  return static_cast<int>(it - class_ids.begin());
}

Dataset Dataset::build(Eigen::MatrixXd features, std::vector<int> labels) {
  if (features.rows() < 1 || features.cols() < 1)
    throw InvalidInput("Dataset: empty feature matrix");
  if (static_cast<Eigen::Index>(labels.size()) != features.cols())
    throw InvalidInput("Dataset: " + std::to_string(labels.size()) +
                       " labels for " + std::to_string(features.cols()) +
                       " columns");
  if (!features.allFinite())
    throw InvalidInput("Dataset: non-finite feature entry");

  std::map<int, std::vector<Eigen::Index>> by_class;
  for (Eigen::Index i = 0; i < features.cols(); ++i)
    by_class[labels[i]].push_back(i);

  Dataset out;
  out.features = std::move(features);
  out.labels = std::move(labels);
  for (auto& [id, cols] : by_class) {
    out.class_ids.push_back(id);
    out.class_columns.push_back(std::move(cols));
  }
  return out;
}

Dataset Dataset::subset_classes(const std::vector<int>& keep_class_ids) const {
  if (keep_class_ids.empty())
    throw InvalidInput("subset_classes: empty class list");
  std::vector<bool> keep_col(count(), false);
  for (int id : keep_class_ids) {
    int c = class_index(id);
    if (c < 0)
      throw InvalidInput("subset_classes: unknown class id " +
                         std::to_string(id));
    for (Eigen::Index col : class_columns[c]) keep_col[col] = true;
  }
  Eigen::Index kept = std::count(keep_col.begin(), keep_col.end(), true);
  Eigen::MatrixXd f(dim(), kept);
  std::vector<int> l;
  l.reserve(kept);
  Eigen::Index w = 0;
  for (Eigen::Index i = 0; i < count(); ++i) {
    if (!keep_col[i]) continue;
    f.col(w++) = features.col(i);
    l.push_back(labels[i]);
  }
  return build(std::move(f), std::move(l));
}

ResidualVector class_residuals(const Eigen::VectorXd& coeffs,
                               const Dataset& data,
                               const Eigen::VectorXd& query, bool squared) {
  if (coeffs.size() != data.count())
    throw InvalidInput("class_residuals: coefficient length " +
                       std::to_string(coeffs.size()) + " != sample count " +
                       std::to_string(data.count()));
  if (query.size() != data.dim())
    throw InvalidInput("class_residuals: query length != feature dim");

  ResidualVector out;
  out.class_ids = data.class_ids;
  out.squared = squared;
  out.values.resize(data.num_classes());
  for (int c = 0; c < data.num_classes(); ++c) {
    Eigen::VectorXd recon = Eigen::VectorXd::Zero(data.dim());
    for (Eigen::Index col : data.class_columns[c])
      recon += coeffs[col] * data.features.col(col);
    const double sq = (query - recon).squaredNorm();
    out.values[c] = squared ? sq : std::sqrt(sq);
  }
  return out;
}

Eigen::VectorXd confidence_scores(const ResidualVector& residuals) {
  if (residuals.values.size() == 0)
    throw InvalidInput("confidence_scores: empty residual vector");
  const double mean = residuals.values.mean();
  return Eigen::VectorXd::Constant(residuals.values.size(), mean) -
         residuals.values;
}

Eigen::Index argmax_index(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

namespace {

LabeledVerdict verdict_from_coeffs(const Dataset& data,
                                   const Eigen::VectorXd& query,
                                   Eigen::VectorXd coeffs) {
  LabeledVerdict v;
  v.residuals = class_residuals(coeffs, data, query, /*squared=*/false);
  v.scores = confidence_scores(v.residuals);
  v.label = data.class_ids[argmax_index(v.scores)];
  v.coefficients = std::move(coeffs);
  return v;
}

}  // namespace

LabeledVerdict classify_src(const Dataset& data, const Eigen::VectorXd& query,
                            const SolverConfig& cfg) {
  return verdict_from_coeffs(data, query, solve_lasso(data.features, query, cfg));
}

LabeledVerdict classify_crc(const Dataset& data, const Eigen::VectorXd& query,
                            double l2_penalty, const RidgeProjector* projector) {
  Eigen::VectorXd coeffs = projector != nullptr
                               ? projector->apply(query)
                               : solve_ridge(data.features, query, l2_penalty);
  return verdict_from_coeffs(data, query, std::move(coeffs));
}

int classify_knn(const Dataset& data, const Eigen::VectorXd& query, int k) {
  if (k < 1 || k > data.count())
    throw InvalidInput("classify_knn: k = " + std::to_string(k) +
                       " out of range [1, " + std::to_string(data.count()) +
                       "]");
  if (query.size() != data.dim())
    throw InvalidInput("classify_knn: query length != feature dim");

  Eigen::VectorXd dist =
      (data.features.colwise() - query).colwise().squaredNorm();
  std::vector<Eigen::Index> order(data.count());
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) {
                      return dist[a] != dist[b] ? dist[a] < dist[b] : a < b;
                    });

  std::map<int, int> votes;
  for (int i = 0; i < k; ++i) ++votes[data.labels[order[i]]];
  int best_label = votes.begin()->first;
  int best_count = votes.begin()->second;
  for (const auto& [label, n] : votes) {
    if (n > best_count) {  // ties keep the lower class id (map is ordered)
      best_label = label;
      best_count = n;
    }
  }
  return best_label;
}

}  // namespace tsstss
