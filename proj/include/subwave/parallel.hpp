#pragma once

#include <cstddef>

namespace subwave {

// Execution policy for the data-parallel kernels (alpha sweeps, Monte Carlo
// trials, frequency scans). Serial is the reference path; Parallel uses
// OpenMP. Both store per-index results and reduce in a fixed order, so the
// outputs are bit-identical.
enum class Exec { Serial, Parallel };

// Worker cap: min(omp_get_max_threads(), SUBWAVE_THREADS) when the
// environment variable is set and positive.
int max_threads();

namespace detail {
void run_indexed(std::size_t n, Exec exec, void (*body)(std::size_t, void*), void* ctx);
}

template <class F>
void parallel_for(std::size_t n, Exec exec, F&& f) {
  detail::run_indexed(
      n, exec,
      [](std::size_t i, void* ctx) { (*static_cast<F*>(ctx))(i); },
      &f);
}

} // namespace subwave
