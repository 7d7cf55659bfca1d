// Copyright 2026 the qgst authors
//
// This source code is licensed under the Apache License, Version 2.0 found in
// the LICENSE file in the root directory of this source tree.

// Compares the serial reference paths against the OpenMP ones: dataset
// sampling at several shot counts, and a small noiseless sweep.

#include "qgst/simulator.hpp"
#include "qgst/sweep.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 3;
  for (int a = 1; a + 1 < argc; a += 2) {
    if (std::string(argv[a]) == "--reps") reps = std::atoi(argv[a + 1]);
  }

#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP: disabled\n");
#endif

  using namespace qgst;
  const GateSet ideal = ideal_gateset();
  ErrorModel em = error_model_for(ErrorKind::overrotation_y, 1e-3, 0.0);
  const GateSet truth = build_true_gateset(ideal, em);

  std::printf("\ndataset sampling (84 circuits)\n");
  std::printf("%12s %12s %12s %9s\n", "shots", "serial ms", "parallel ms",
              "speedup");
  for (std::uint64_t shots : {2000ull, 20000ull, 100000ull}) {
    const double ts =
        time_ms([&] { run_protocol_serial(truth, shots, 7); }, reps);
    const double tp = time_ms([&] { run_protocol(truth, shots, 7); }, reps);
    std::printf("%12llu %12.2f %12.2f %8.2fx\n",
                static_cast<unsigned long long>(shots), ts, tp, ts / tp);
  }

  SweepConfig cfg = default_sweep_config(ErrorKind::overrotation_y);
  cfg.magnitudes = log_spaced(1e-4, 1e-2, 6);
  std::printf("\nnoiseless sweep (%zu points, lgst + gst_mle + qpt_mle)\n",
              cfg.magnitudes.size());
  const double ts = time_ms([&] { run_sweep(cfg, false); }, 1);
  const double tp = time_ms([&] { run_sweep(cfg, true); }, 1);
  std::printf("%12s %12.2f %12.2f %8.2fx\n", "", ts, tp, ts / tp);
  return 0;
}
