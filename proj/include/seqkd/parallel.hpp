#pragma once

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace seqkd {

/// Runs body(i) for i in [0, count). With parallel set and OpenMP available,
/// iterations are distributed across threads; each iteration must write only
/// to its own output slot and own its own rng stream, so results do not
/// depend on scheduling. The serial path is the reference implementation.
template <class F>
void run_indexed(std::size_t count, bool parallel, F&& body) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (long long i = 0; i < static_cast<long long>(count); ++i)
      body(static_cast<std::size_t>(i));
    return;
  }
#else
  (void)parallel;
#endif
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace seqkd
