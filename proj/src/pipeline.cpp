#include "tsstss/pipeline.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tsstss {

int PipelineConfig::resolve_candidates(int class_count) const {
  if (class_count < 1)
    throw InvalidInput("resolve_candidates: class_count must be >= 1");
  int m = num_candidates.value_or((class_count + 1) / 2);  // ceil(C/2)
  if (m < 1 || m > class_count)
    throw InvalidInput("resolve_candidates: num_candidates = " +
                       std::to_string(m) + " out of range [1, " +
                       std::to_string(class_count) + "]");
  return m;
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Agreement: return "Agreement";
    case Provenance::TeacherOverride: return "TeacherOverride";
    case Provenance::StudentOverride: return "StudentOverride";
  }
  return "?";
}

std::vector<int> select_candidates(const ResidualVector& deviations,
                                   int num_candidates) {
  const int n = static_cast<int>(deviations.values.size());
  if (num_candidates < 1 || num_candidates > n)
    throw InvalidInput("select_candidates: M = " +
                       std::to_string(num_candidates) + " out of range [1, " +
                       std::to_string(n) + "]");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return deviations.values[a] < deviations.values[b];
  });  // stable: equal deviations keep ascending class order
  std::vector<int> picked;
  picked.reserve(num_candidates);
  for (int i = 0; i < num_candidates; ++i)
    picked.push_back(deviations.class_ids[order[i]]);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::shared_ptr<const StudentModelCache::Model> StudentModelCache::get(
    const std::vector<int>& candidates) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = models_.find(candidates);
    if (it != models_.end()) return it->second;
  }
  Dataset subset = train_->subset_classes(candidates);
  RidgeProjector projector(subset.features, l2_penalty_);
  auto model = std::make_shared<const Model>(
      Model{std::move(subset), std::move(projector)});
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = models_.emplace(candidates, std::move(model));
  return it->second;  // losing a race keeps the first insert
}

TeacherVerdict teacher_stage(const Dataset& train, const Eigen::VectorXd& query,
                             const PipelineConfig& cfg) {
  const int m = cfg.resolve_candidates(train.num_classes());
  LabeledVerdict src = classify_src(train, query, cfg.solver);

  TeacherVerdict t;
  t.label = src.label;
  t.scores = src.scores;
  t.gate = src.scores[argmax_index(src.scores)];
  t.deviations = class_residuals(src.coefficients, train, query, /*squared=*/true);
  t.candidates = select_candidates(t.deviations, m);
  return t;
}

StudentVerdict student_stage(const Dataset& train,
                             const std::vector<int>& candidates,
                             const Eigen::VectorXd& query,
                             const PipelineConfig& cfg,
                             StudentModelCache* cache) {
  if (candidates.empty())
    throw InvalidInput("student_stage: empty candidate list");

  LabeledVerdict crc;
  std::shared_ptr<const StudentModelCache::Model> model;
  if (cache != nullptr) {
    model = cache->get(candidates);
    crc = classify_crc(model->subset, query, cfg.solver.l2_penalty,
                       &model->projector);
  } else {
    Dataset subset = train.subset_classes(candidates);
    crc = classify_crc(subset, query, cfg.solver.l2_penalty);
  }

  StudentVerdict s;
  s.label = crc.label;
  s.classes = crc.residuals.class_ids;
  s.scores = crc.scores;
  s.top_score = crc.scores[argmax_index(crc.scores)];
  return s;
}

Decision decide(const TeacherVerdict& teacher, const StudentVerdict& student) {
  if (std::find(teacher.candidates.begin(), teacher.candidates.end(),
                student.label) == teacher.candidates.end())
    throw InvalidInput("decide: student label not among teacher candidates");

  Decision d;
  d.teacher = teacher;
  d.student = student;
  if (teacher.label == student.label) {
    d.final_label = teacher.label;
    d.provenance = Provenance::Agreement;
  } else if (student.top_score > teacher.gate) {
    d.final_label = student.label;
    d.provenance = Provenance::StudentOverride;
  } else {
    d.final_label = teacher.label;
    d.provenance = Provenance::TeacherOverride;
  }
  return d;
}

Decision classify(const Dataset& train, const Eigen::VectorXd& query,
                  const PipelineConfig& cfg, StudentModelCache* cache) {
  TeacherVerdict t = teacher_stage(train, query, cfg);
  StudentVerdict s = student_stage(train, t.candidates, query, cfg, cache);
  return decide(t, s);
}

}  // namespace tsstss
