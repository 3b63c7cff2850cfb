#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tsstss/bench.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int run_command(const std::string& config_path) {
  tsstss::ExperimentConfig cfg =
      tsstss::ExperimentConfig::from_json_file(config_path);
  tsstss::SweepReport report = tsstss::run_experiment(cfg);
  for (const auto& [method, best, avg] : report.summaries)
    std::printf("%-9s MAX %.4f  AVG %.4f\n", method.c_str(), best, avg);
  std::printf("wrote %s/{results.csv,decisions.jsonl,summary.txt}\n",
              cfg.out_dir.c_str());
  return kExitOk;
}

struct ClassifyArgs {
  std::string train_path, test_path, method, out_dir;
  std::string candidates = "half";
  bool has_header = false;
  double alpha = 0.01;
  double lambda = 1e-3;
  int knn_k = 1;
};

int classify_command(const ClassifyArgs& args) {
  tsstss::MethodParams params;
  params.solver.l1_penalty = args.alpha;
  params.solver.l2_penalty = args.lambda;
  params.knn_k = args.knn_k;
  if (args.candidates != "half") {
    try {
      params.num_candidates = std::stoi(args.candidates);
    } catch (const std::exception&) {
      throw tsstss::ConfigError("--candidates must be a count or 'half'");
    }
  }

  tsstss::Dataset train =
      tsstss::normalize_columns(tsstss::load_csv(args.train_path, args.has_header));
  tsstss::Dataset test =
      tsstss::normalize_columns(tsstss::load_csv(args.test_path, args.has_header));

  const auto t0 = std::chrono::steady_clock::now();
  auto [accuracy, records] =
      tsstss::evaluate_method(args.method, train, test, params);
  const auto t1 = std::chrono::steady_clock::now();

  int min_per_class = static_cast<int>(train.count());
  for (const auto& cols : train.class_columns)
    min_per_class = std::min(min_per_class, static_cast<int>(cols.size()));

  tsstss::SweepReport report;
  tsstss::SweepCell cell;
  cell.method = args.method;
  cell.train_per_class = min_per_class;
  cell.accuracy = accuracy;
  cell.n_test = static_cast<int>(test.count());
  cell.seconds = std::chrono::duration<double>(t1 - t0).count();
  report.cells.push_back(cell);
  report.finalize_summaries();
  for (auto& r : records) r.train_per_class = min_per_class;
  tsstss::emit_report(report, std::move(records), args.out_dir);

  std::printf("%s accuracy %.4f on %d samples\n", args.method.c_str(), accuracy,
              cell.n_test);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TS-STSS classification benchmark"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "run a config-driven experiment");
  run->add_option("--config", config_path, "experiment config (JSON)")
      ->required();

  ClassifyArgs cargs;
  CLI::App* classify =
      app.add_subcommand("classify", "classify a CSV test set");
  classify->add_option("--train", cargs.train_path, "training CSV")->required();
  classify->add_option("--test", cargs.test_path, "test CSV")->required();
  classify
      ->add_option("--method", cargs.method, "src | crc | knn | tsstss")
      ->required()
      ->check(CLI::IsMember({"src", "crc", "knn", "tsstss"}));
  classify->add_option("--out", cargs.out_dir, "output directory")->required();
  classify->add_flag("--has-header", cargs.has_header, "CSV files have a header row");
  classify->add_option("--alpha", cargs.alpha, "L1 penalty");
  classify->add_option("--lambda", cargs.lambda, "L2 penalty");
  classify->add_option("--candidates", cargs.candidates,
                       "candidate class count or 'half'");
  classify->add_option("--knn-k", cargs.knn_k, "KNN neighbor count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return run_command(config_path);
    return classify_command(cargs);
  } catch (const tsstss::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const tsstss::FormatError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const tsstss::InvalidInput& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const tsstss::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const tsstss::NotConverged& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
