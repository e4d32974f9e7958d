#pragma once

#include <cstddef>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmpbe {

/// Execution policy for the data-parallel kernels (multi-start solves,
/// sphere sampling, oracle restarts, homotopy grids). Serial is the
/// reference path; results must be identical under either policy, which
/// holds because every task writes to its own index and reductions are
/// performed serially afterwards.
enum class ExecPolicy { Serial, Parallel };

template <class F>
void parallel_for(std::size_t n, ExecPolicy policy, F&& body) {
#ifdef _OPENMP
  if (policy == ExecPolicy::Parallel && n > 1) {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  (void)policy;
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace rmpbe
