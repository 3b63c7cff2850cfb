#ifndef TSSTSS_BENCH_HPP_
#define TSSTSS_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tsstss/data.hpp"
#include "tsstss/pipeline.hpp"

namespace tsstss {

// Bad experiment config (schema, unknown key, missing field). Maps to exit
// code 1 in the CLI, versus 2 for data/format errors.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct MethodParams {
  SolverConfig solver;
  std::optional<int> num_candidates;  // empty = half the classes
  int knn_k = 1;
};

struct ExperimentConfig {
  enum class Source { Csv, Idx, Synthetic };

  Source source = Source::Synthetic;
  std::string csv_path;
  bool csv_has_header = false;
  std::string idx_images, idx_labels;
  SyntheticSpec synthetic;

  bool normalize = true;
  int downsample_factor = 1;
  int image_height = 0, image_width = 0;

  std::vector<int> sweep;
  std::uint64_t seed = 0;
  int max_test_per_class = 0;  // 0 = keep all held-out samples

  std::vector<std::string> methods;
  MethodParams params;
  std::string out_dir;

  void validate() const;
  static ExperimentConfig from_json_file(const std::string& path);
};

// One evaluated test sample. The teacher/student trace fields are only
// meaningful for the tsstss method (has_trace).
struct DecisionRecord {
  std::string method;
  int train_per_class = 0;
  int sample = 0;
  int true_label = 0;
  int predicted = -1;
  bool correct = false;
  bool failed = false;
  std::string error;

  bool has_trace = false;
  int teacher_label = -1;
  int student_label = -1;
  double gate = 0.0;
  double top_score = 0.0;
  std::string provenance;
};

struct SweepCell {
  std::string method;
  int train_per_class = 0;
  double accuracy = 0.0;
  int n_test = 0;
  double seconds = 0.0;
};

struct SweepReport {
  std::vector<SweepCell> cells;
  // (method, max accuracy, avg accuracy), in first-seen method order.
  std::vector<std::tuple<std::string, double, double>> summaries;

  void finalize_summaries();
};

// Evaluates one method on every test column. Per-sample solver failures are
// counted as misclassifications and recorded, never thrown. The OpenMP and
// serial paths produce identical records.
std::pair<double, std::vector<DecisionRecord>> evaluate_method(
    const std::string& method, const Dataset& train, const Dataset& test,
    const MethodParams& params);

// Serial reference for evaluate_method, kept for testing and benchmarking.
std::pair<double, std::vector<DecisionRecord>> evaluate_method_serial(
    const std::string& method, const Dataset& train, const Dataset& test,
    const MethodParams& params);

SweepReport run_experiment(const ExperimentConfig& cfg);

// Writes results.csv, decisions.jsonl (sorted by method, sweep point,
// sample), and summary.txt into out_dir.
void emit_report(const SweepReport& report,
                 std::vector<DecisionRecord> decisions,
                 const std::string& out_dir);

}  // namespace tsstss

#endif  // TSSTSS_BENCH_HPP_
