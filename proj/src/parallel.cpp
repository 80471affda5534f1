#include "subwave/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace subwave {

int max_threads() {
#ifdef _OPENMP
  int n = omp_get_max_threads();
#else
  int n = 1;
#endif
  if (const char* env = std::getenv("SUBWAVE_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap > 0 && cap < n) n = cap;
    } catch (...) {
      // ignore malformed values
    }
  }
  return n;
}

namespace detail {

void run_indexed(std::size_t n, Exec exec, void (*body)(std::size_t, void*), void* ctx) {
  if (exec == Exec::Parallel) {
#ifdef _OPENMP
    const int nt = max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      body(static_cast<std::size_t>(i), ctx);
    return;
#endif
  }
  for (std::size_t i = 0; i < n; ++i) body(i, ctx);
}

} // namespace detail
} // namespace subwave
