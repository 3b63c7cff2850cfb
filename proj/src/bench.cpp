#include "tsstss/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsstss {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kKnownMethods = {"src", "crc", "knn", "tsstss"};

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (known.find(it.key()) == known.end())
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError("config: missing key '" + key + "' in " + where);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + key + "' in " + where);
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (sweep.empty()) throw ConfigError("config: split.sweep must be non-empty");
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i] <= sweep[i - 1])
      throw ConfigError("config: split.sweep must be strictly increasing");
  if (sweep.front() < 1)
    throw ConfigError("config: split.sweep values must be >= 1");
  if (methods.empty()) throw ConfigError("config: methods must be non-empty");
  for (const auto& m : methods)
    if (kKnownMethods.find(m) == kKnownMethods.end())
      throw ConfigError("config: unknown method '" + m + "'");
  if (out_dir.empty()) throw ConfigError("config: output.dir must be set");
  if (downsample_factor < 1)
    throw ConfigError("config: preprocess.downsample_factor must be >= 1");
  if (downsample_factor > 1 && (image_height < 1 || image_width < 1))
    throw ConfigError(
        "config: downsampling requires preprocess.image_height/image_width");
  if (max_test_per_class < 0)
    throw ConfigError("config: split.max_test_per_class must be >= 0");
  if (params.knn_k < 1) throw ConfigError("config: params.knn_k must be >= 1");
  try {
    params.solver.validate();
    if (source == Source::Synthetic) synthetic.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  reject_unknown_keys(
      root, {"dataset", "preprocess", "split", "methods", "params", "output"},
      "top level");

  ExperimentConfig cfg;

  const json& ds = root.contains("dataset") ? root["dataset"] : json::object();
  const std::string source = require<std::string>(ds, "source", "dataset");
  if (source == "csv") {
    reject_unknown_keys(ds, {"source", "path", "has_header"}, "dataset");
    cfg.source = Source::Csv;
    cfg.csv_path = require<std::string>(ds, "path", "dataset");
    cfg.csv_has_header = get_or(ds, "has_header", false);
  } else if (source == "idx") {
    reject_unknown_keys(ds, {"source", "images", "labels"}, "dataset");
    cfg.source = Source::Idx;
    cfg.idx_images = require<std::string>(ds, "images", "dataset");
    cfg.idx_labels = require<std::string>(ds, "labels", "dataset");
  } else if (source == "synthetic") {
    reject_unknown_keys(ds,
                        {"source", "classes", "subspace_dim", "ambient_dim",
                         "train_per_class", "test_per_class", "noise_sigma",
                         "seed"},
                        "dataset");
    cfg.source = Source::Synthetic;
    cfg.synthetic.classes = get_or(ds, "classes", cfg.synthetic.classes);
    cfg.synthetic.subspace_dim =
        get_or(ds, "subspace_dim", cfg.synthetic.subspace_dim);
    cfg.synthetic.ambient_dim =
        get_or(ds, "ambient_dim", cfg.synthetic.ambient_dim);
    cfg.synthetic.train_per_class =
        get_or(ds, "train_per_class", cfg.synthetic.train_per_class);
    cfg.synthetic.test_per_class =
        get_or(ds, "test_per_class", cfg.synthetic.test_per_class);
    cfg.synthetic.noise_sigma =
        get_or(ds, "noise_sigma", cfg.synthetic.noise_sigma);
    cfg.synthetic.seed = get_or(ds, "seed", cfg.synthetic.seed);
  } else {
    throw ConfigError("config: dataset.source must be csv, idx or synthetic");
  }

  if (root.contains("preprocess")) {
    const json& pp = root["preprocess"];
    reject_unknown_keys(
        pp, {"normalize", "downsample_factor", "image_height", "image_width"},
        "preprocess");
    cfg.normalize = get_or(pp, "normalize", true);
    cfg.downsample_factor = get_or(pp, "downsample_factor", 1);
    cfg.image_height = get_or(pp, "image_height", 0);
    cfg.image_width = get_or(pp, "image_width", 0);
  }

  const json& split = root.contains("split") ? root["split"] : json::object();
  reject_unknown_keys(split, {"sweep", "seed", "max_test_per_class"}, "split");
  cfg.sweep = require<std::vector<int>>(split, "sweep", "split");
  cfg.seed = get_or<std::uint64_t>(split, "seed", 0);
  cfg.max_test_per_class = get_or(split, "max_test_per_class", 0);

  cfg.methods = require<std::vector<std::string>>(root, "methods", "top level");

  if (root.contains("params")) {
    const json& p = root["params"];
    reject_unknown_keys(p,
                        {"alpha", "lambda", "tolerance", "max_iterations",
                         "candidates", "knn_k"},
                        "params");
    cfg.params.solver.l1_penalty = get_or(p, "alpha", cfg.params.solver.l1_penalty);
    cfg.params.solver.l2_penalty = get_or(p, "lambda", cfg.params.solver.l2_penalty);
    cfg.params.solver.tolerance = get_or(p, "tolerance", cfg.params.solver.tolerance);
    cfg.params.solver.max_iterations =
        get_or(p, "max_iterations", cfg.params.solver.max_iterations);
    cfg.params.knn_k = get_or(p, "knn_k", 1);
    if (p.contains("candidates")) {
      const json& c = p["candidates"];
      if (c.is_string()) {
        if (c.get<std::string>() != "half")
          throw ConfigError("config: params.candidates must be a count or 'half'");
      } else if (c.is_number_integer()) {
        cfg.params.num_candidates = c.get<int>();
      } else {
        throw ConfigError("config: params.candidates must be a count or 'half'");
      }
    }
  }

  const json& out = root.contains("output") ? root["output"] : json::object();
  reject_unknown_keys(out, {"dir"}, "output");
  cfg.out_dir = require<std::string>(out, "dir", "output");

  cfg.validate();
  return cfg;
}

namespace {

struct MethodContext {
  const Dataset* train;
  const MethodParams* params;
  std::unique_ptr<RidgeProjector> crc_projector;   // crc only
  std::unique_ptr<StudentModelCache> student_cache;  // tsstss only
};

MethodContext make_context(const std::string& method, const Dataset& train,
                           const MethodParams& params) {
  MethodContext ctx{&train, &params, nullptr, nullptr};
  if (method == "crc")
    ctx.crc_projector = std::make_unique<RidgeProjector>(
        train.features, params.solver.l2_penalty);
  if (method == "tsstss")
    ctx.student_cache = std::make_unique<StudentModelCache>(
        train, params.solver.l2_penalty);
  return ctx;
}

DecisionRecord evaluate_sample(const std::string& method,
                               const MethodContext& ctx, const Dataset& test,
                               Eigen::Index i) {
  DecisionRecord rec;
  rec.method = method;
  rec.sample = static_cast<int>(i);
  rec.true_label = test.labels[i];
  const Eigen::VectorXd query = test.features.col(i);
  try {
    if (method == "src") {
      rec.predicted = classify_src(*ctx.train, query, ctx.params->solver).label;
    } else if (method == "crc") {
      rec.predicted = classify_crc(*ctx.train, query,
                                   ctx.params->solver.l2_penalty,
                                   ctx.crc_projector.get())
                          .label;
    } else if (method == "knn") {
      rec.predicted = classify_knn(*ctx.train, query, ctx.params->knn_k);
    } else if (method == "tsstss") {
      PipelineConfig pcfg{ctx.params->solver, ctx.params->num_candidates};
      Decision d = classify(*ctx.train, query, pcfg, ctx.student_cache.get());
      rec.predicted = d.final_label;
      rec.has_trace = true;
      rec.teacher_label = d.teacher.label;
      rec.student_label = d.student.label;
      rec.gate = d.teacher.gate;
      rec.top_score = d.student.top_score;
      rec.provenance = to_string(d.provenance);
    } else {
      throw InvalidInput("evaluate_method: unknown method '" + method + "'");
    }
  } catch (const NotConverged& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.predicted = -1;
  } catch (const NumericalFailure& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.predicted = -1;
  }
  rec.correct = !rec.failed && rec.predicted == rec.true_label;
  return rec;
}

std::pair<double, std::vector<DecisionRecord>> evaluate_impl(
    const std::string& method, const Dataset& train, const Dataset& test,
    const MethodParams& params, bool parallel) {
  if (kKnownMethods.find(method) == kKnownMethods.end())
    throw InvalidInput("evaluate_method: unknown method '" + method + "'");
  if (test.count() < 1) throw InvalidInput("evaluate_method: empty test set");
  if (train.dim() != test.dim())
    throw InvalidInput("evaluate_method: train/test feature dims differ");
  for (int id : test.class_ids)
    if (train.class_index(id) < 0)
      throw InvalidInput("evaluate_method: test class " + std::to_string(id) +
                         " missing from training set");

  MethodContext ctx = make_context(method, train, params);
  const Eigen::Index n = test.count();
  std::vector<DecisionRecord> records(n);

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (Eigen::Index i = 0; i < n; ++i)
      records[i] = evaluate_sample(method, ctx, test, i);
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      records[i] = evaluate_sample(method, ctx, test, i);
  }

  Eigen::Index correct = 0;
  for (const auto& r : records) correct += r.correct ? 1 : 0;
  return {static_cast<double>(correct) / static_cast<double>(n),
          std::move(records)};
}

}  // namespace

std::pair<double, std::vector<DecisionRecord>> evaluate_method(
    const std::string& method, const Dataset& train, const Dataset& test,
    const MethodParams& params) {
  return evaluate_impl(method, train, test, params, /*parallel=*/true);
}

std::pair<double, std::vector<DecisionRecord>> evaluate_method_serial(
    const std::string& method, const Dataset& train, const Dataset& test,
    const MethodParams& params) {
  return evaluate_impl(method, train, test, params, /*parallel=*/false);
}

void SweepReport::finalize_summaries() {
  summaries.clear();
  std::vector<std::string> order;
  for (const auto& c : cells)
    if (std::find(order.begin(), order.end(), c.method) == order.end())
      order.push_back(c.method);
  for (const auto& m : order) {
    double best = 0.0, sum = 0.0;
    int n = 0;
    for (const auto& c : cells)
      if (c.method == m) {
        best = std::max(best, c.accuracy);
        sum += c.accuracy;
        ++n;
      }
    summaries.emplace_back(m, best, sum / n);
  }
}

namespace {

Dataset load_pool(const ExperimentConfig& cfg) {
  switch (cfg.source) {
    case ExperimentConfig::Source::Csv:
      return load_csv(cfg.csv_path, cfg.csv_has_header);
    case ExperimentConfig::Source::Idx:
      return load_idx(cfg.idx_images, cfg.idx_labels);
    case ExperimentConfig::Source::Synthetic: {
      auto [train, test] = generate_synthetic(cfg.synthetic);
      return concat(train, test);
    }
  }
  throw ConfigError("config: bad dataset source");
}

}  // namespace

SweepReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  Dataset pool = load_pool(cfg);
  if (cfg.downsample_factor > 1)
    pool = downsample_images(pool, cfg.image_height, cfg.image_width,
                             cfg.downsample_factor);
  if (cfg.normalize) pool = normalize_columns(pool);

  SweepReport report;
  std::vector<DecisionRecord> decisions;
  for (int tpc : cfg.sweep) {
    auto [train, test] = holdout_split(pool, SplitSpec{tpc, cfg.seed});
    if (cfg.max_test_per_class > 0)
      test = take_per_class(test, cfg.max_test_per_class);
    for (const auto& method : cfg.methods) {
      const auto t0 = std::chrono::steady_clock::now();
      auto [accuracy, records] = evaluate_method(method, train, test, cfg.params);
      const auto t1 = std::chrono::steady_clock::now();
      SweepCell cell;
      cell.method = method;
      cell.train_per_class = tpc;
      cell.accuracy = accuracy;
      cell.n_test = static_cast<int>(test.count());
      cell.seconds = std::chrono::duration<double>(t1 - t0).count();
      report.cells.push_back(cell);
      for (auto& r : records) {
        r.train_per_class = tpc;
        decisions.push_back(std::move(r));
      }
    }
  }
  report.finalize_summaries();
  emit_report(report, std::move(decisions), cfg.out_dir);
  return report;
}

namespace {

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

json record_to_json(const DecisionRecord& r) {
  json o;
  o["method"] = r.method;
  o["train_per_class"] = r.train_per_class;
  o["sample"] = r.sample;
  o["label"] = r.true_label;
  o["predicted"] = r.predicted;
  o["correct"] = r.correct;
  if (r.failed) o["error"] = r.error;
  if (r.has_trace) {
    o["teacher"] = r.teacher_label;
    o["student"] = r.student_label;
    o["gate"] = r.gate;
    o["score"] = r.top_score;
    o["provenance"] = r.provenance;
  }
  return o;
}

}  // namespace

void emit_report(const SweepReport& report,
                 std::vector<DecisionRecord> decisions,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir))
    throw FormatError(out_dir + ": cannot create output directory");

  {
    std::ofstream csv(fs::path(out_dir) / "results.csv");
    if (!csv) throw FormatError(out_dir + "/results.csv: cannot open");
    csv << "method,train_per_class,accuracy,n_test,seconds\n";
    for (const auto& c : report.cells)
      csv << c.method << ',' << c.train_per_class << ','
          << format_double(c.accuracy, "%.6f") << ',' << c.n_test << ','
          << format_double(c.seconds, "%.3f") << '\n';
    for (const auto& [method, best, avg] : report.summaries) {
      csv << method << ",MAX," << format_double(best, "%.6f") << ",,\n";
      csv << method << ",AVG," << format_double(avg, "%.6f") << ",,\n";
    }
    if (!csv) throw FormatError(out_dir + "/results.csv: write failed");
  }

  {
    std::stable_sort(decisions.begin(), decisions.end(),
                     [](const DecisionRecord& a, const DecisionRecord& b) {
                       if (a.method != b.method) return a.method < b.method;
                       if (a.train_per_class != b.train_per_class)
                         return a.train_per_class < b.train_per_class;
                       return a.sample < b.sample;
                     });
    std::ofstream jsonl(fs::path(out_dir) / "decisions.jsonl");
    if (!jsonl) throw FormatError(out_dir + "/decisions.jsonl: cannot open");
    for (const auto& r : decisions) jsonl << record_to_json(r).dump() << '\n';
    if (!jsonl) throw FormatError(out_dir + "/decisions.jsonl: write failed");
  }

  {
    std::ofstream txt(fs::path(out_dir) / "summary.txt");
    if (!txt) throw FormatError(out_dir + "/summary.txt: cannot open");
    txt << "method    train/class  accuracy  n_test  seconds\n";
    for (const auto& c : report.cells) {
      char line[128];
      std::snprintf(line, sizeof line, "%-9s %11d  %8.4f  %6d  %7.3f\n",
                    c.method.c_str(), c.train_per_class, c.accuracy, c.n_test,
                    c.seconds);
      txt << line;
    }
    txt << "\nmethod       MAX      AVG\n";
    for (const auto& [method, best, avg] : report.summaries) {
      char line[128];
      std::snprintf(line, sizeof line, "%-9s %7.4f  %7.4f\n", method.c_str(),
                    best, avg);
      txt << line;
    }
    if (!txt) throw FormatError(out_dir + "/summary.txt: write failed");
  }
}

}  // namespace tsstss
