#ifndef TSSTSS_PIPELINE_HPP_
#define TSSTSS_PIPELINE_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tsstss/linsolve.hpp"
#include "tsstss/represent.hpp"

namespace tsstss {

// Two-stage pipeline parameters. num_candidates empty means "half": the
// candidate count M resolves to ceil(C / 2) for C classes.
struct PipelineConfig {
  SolverConfig solver;
  std::optional<int> num_candidates;

  int resolve_candidates(int class_count) const;
};

// First-stage output: sparse-representation label, gate value, and the
// candidate classes handed to the student.
struct TeacherVerdict {
  int label = -1;
  double gate = 0.0;           // max teacher score
  Eigen::VectorXd scores;      // over all classes
  ResidualVector deviations;   // squared form, drives candidate selection
  std::vector<int> candidates; // ascending class ids
};

// Second-stage output over the candidate classes only.
struct StudentVerdict {
  int label = -1;
  double top_score = 0.0;
  std::vector<int> classes;  // candidate class ids, ascending
  Eigen::VectorXd scores;    // aligned with classes
};

enum class Provenance { Agreement, TeacherOverride, StudentOverride };

const char* to_string(Provenance p);

struct Decision {
  int final_label = -1;
  Provenance provenance = Provenance::Agreement;
  TeacherVerdict teacher;
  StudentVerdict student;
};

// The M classes with the smallest squared deviations, ties broken by
// ascending class id; result sorted ascending by class id.
std::vector<int> select_candidates(const ResidualVector& deviations,
                                   int num_candidates);

// Grow-only memo of per-candidate-set student models (subset dictionary +
// ridge projector). Safe for concurrent lookups; inserts are idempotent.
class StudentModelCache {
 public:
  struct Model {
    Dataset subset;
    RidgeProjector projector;
  };

  StudentModelCache(const Dataset& train, double l2_penalty)
      : train_(&train), l2_penalty_(l2_penalty) {}

  std::shared_ptr<const Model> get(const std::vector<int>& candidates);

 private:
  const Dataset* train_;
  double l2_penalty_;
  std::mutex mutex_;
  std::map<std::vector<int>, std::shared_ptr<const Model>> models_;
};

TeacherVerdict teacher_stage(const Dataset& train, const Eigen::VectorXd& query,
                             const PipelineConfig& cfg);

StudentVerdict student_stage(const Dataset& train,
                             const std::vector<int>& candidates,
                             const Eigen::VectorXd& query,
                             const PipelineConfig& cfg,
                             StudentModelCache* cache = nullptr);

// Score-gated rule: agreement keeps the shared label; otherwise the student
// wins only with a strictly higher top score.
Decision decide(const TeacherVerdict& teacher, const StudentVerdict& student);

// Full two-stage classification with the complete trace retained.
Decision classify(const Dataset& train, const Eigen::VectorXd& query,
                  const PipelineConfig& cfg, StudentModelCache* cache = nullptr);

}  // namespace tsstss

#endif  // TSSTSS_PIPELINE_HPP_
