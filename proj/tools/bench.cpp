// Compares the serial reference trial runner against the OpenMP-parallel one
// on the detection experiment and the per-photon disturbance estimator, and
// checks that both produce identical results.

#include <chrono>
#include <cstdio>

#include "seqkd/session.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <class F>
double time_seconds(F&& fn) {
  auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both runs are serial\n");
#endif

  seqkd::SessionConfig cfg;
  cfg.n = 400;
  cfg.bits = 50;
  cfg.seed = 42;
  const std::size_t trials = 200;

  seqkd::DetectionSummary serial_summary, parallel_summary;
  double t_serial = time_seconds(
      [&] { serial_summary = seqkd::detection_experiment(cfg, trials, false); });
  double t_parallel = time_seconds(
      [&] { parallel_summary = seqkd::detection_experiment(cfg, trials, true); });
  bool same = serial_summary.completed_bits == parallel_summary.completed_bits &&
              serial_summary.aborts == parallel_summary.aborts;
  std::printf("detection_experiment (%zu honest sessions, n=%zu, bits=%zu)\n", trials, cfg.n,
              cfg.bits);
  std::printf("  serial:   %.3f s\n", t_serial);
  std::printf("  parallel: %.3f s  (speedup %.2fx, results %s)\n", t_parallel,
              t_serial / t_parallel, same ? "identical" : "DIFFER");

  const std::size_t photons = 2'000'000;
  double serial_rate = 0.0, parallel_rate = 0.0;
  double t2_serial = time_seconds([&] {
    serial_rate = seqkd::feedback_failure_experiment(
        seqkd::VariantId::V1, seqkd::EveStrategy::random_da(), photons, 7, false);
  });
  double t2_parallel = time_seconds([&] {
    parallel_rate = seqkd::feedback_failure_experiment(
        seqkd::VariantId::V1, seqkd::EveStrategy::random_da(), photons, 7, true);
  });
  std::printf("feedback_failure_experiment (%zu photons)\n", photons);
  std::printf("  serial:   %.3f s\n", t2_serial);
  std::printf("  parallel: %.3f s  (speedup %.2fx, results %s)\n", t2_parallel,
              t2_serial / t2_parallel, serial_rate == parallel_rate ? "identical" : "DIFFER");
  return same && serial_rate == parallel_rate ? 0 : 1;
}
