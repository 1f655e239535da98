#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace mk::par {

enum class Exec { Serial, Parallel };

/// Run fn(i) for i in [0, n). Results must be written to per-index slots so
/// the outcome does not depend on scheduling. If several iterations throw,
/// the exception from the lowest index is rethrown.
template <class F>
void for_each(std::size_t n, Exec exec, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  if (exec == Exec::Parallel) {
    const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// out[i] = fn(i), evaluated serially or across OpenMP threads.
template <class T, class F>
std::vector<T> map(std::size_t n, Exec exec, F&& fn) {
  std::vector<T> out(n);
  for_each(n, exec, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

int max_threads();

}  // namespace mk::par
