// Compares the OpenMP evaluation path against the serial reference on a
// synthetic workload and checks that both produce identical predictions.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tsstss/bench.hpp"

int main() {
  tsstss::SyntheticSpec spec;
  spec.classes = 10;
  spec.subspace_dim = 3;
  spec.ambient_dim = 64;
  spec.train_per_class = 30;
  spec.test_per_class = 40;
  spec.noise_sigma = 0.02;
  spec.seed = 11;

  auto [train, test] = tsstss::generate_synthetic(spec);
  train = tsstss::normalize_columns(train);
  test = tsstss::normalize_columns(test);

  tsstss::MethodParams params;
  params.knn_k = 3;

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP\n");
#endif
  std::printf("%-8s %10s %10s %8s\n", "method", "serial(s)", "omp(s)",
              "speedup");

  for (const std::string method : {"src", "crc", "knn", "tsstss"}) {
    auto t0 = std::chrono::steady_clock::now();
    auto serial = tsstss::evaluate_method_serial(method, train, test, params);
    auto t1 = std::chrono::steady_clock::now();
    auto parallel = tsstss::evaluate_method(method, train, test, params);
    auto t2 = std::chrono::steady_clock::now();

    bool same = serial.first == parallel.first &&
                serial.second.size() == parallel.second.size();
    if (same)
      for (std::size_t i = 0; i < serial.second.size(); ++i)
        same = same &&
               serial.second[i].predicted == parallel.second[i].predicted;

    const double ts = std::chrono::duration<double>(t1 - t0).count();
    const double tp = std::chrono::duration<double>(t2 - t1).count();
    std::printf("%-8s %10.3f %10.3f %8.2f %s\n", method.c_str(), ts, tp,
                ts / tp, same ? "" : "MISMATCH");
    if (!same) return 1;
  }
  return 0;
}
