#pragma once

#include <cstddef>
#include <cstdint>

namespace corrugate {

/// Serial is the reference path kept for testing; Parallel runs the same
/// loop body under OpenMP. Both must produce identical results.
enum class Execution { Serial, Parallel };

/// Reads CORRUGATE_THREADS and caps the OpenMP team size accordingly.
/// Returns the resulting thread count.
int configure_threads_from_env();

int max_threads();

template <class Body>
void for_each_index(std::ptrdiff_t count, Execution exec, Body&& body) {
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
  }
}

}  // namespace corrugate
