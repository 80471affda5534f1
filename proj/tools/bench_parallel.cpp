// Timing comparison of the serial reference kernels against their OpenMP
// variants: band-structure sweep, stability Monte Carlo, frequency scan.
#include <chrono>
#include <cstdio>

#include "subwave/multipole.hpp"
#include "subwave/stability.hpp"
#include "subwave/topology.hpp"

using namespace subwave;

namespace {

template <class F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms);
}

} // namespace

int main() {
  std::printf("subwave-bench: %d worker threads\n", max_threads());

  DimerCell cell{12.0, 54.0, 1.0};
  const double delta = 1e-3;

  {
    const auto run = [&](Exec e) {
      compute_band_structure(cell, delta, 512, QuasiModel::Full, 1, e);
    };
    const double ts = time_ms([&] { run(Exec::Serial); });
    const double tp = time_ms([&] { run(Exec::Parallel); });
    report("band sweep (512 pts, p=1)", ts, tp);
  }

  {
    const ChainGeometry chain = build_dimer_chain(10, 12.0, 42.0, 1.0);
    const auto run = [&](Exec e) {
      run_stability_experiment(chain, StabilityModel::Full, 8.0, 200, 7, delta, e);
    };
    const double ts = time_ms([&] { run(Exec::Serial); });
    const double tp = time_ms([&] { run(Exec::Parallel); });
    report("stability (N=41, 200 trials)", ts, tp);
  }

  {
    const ChainGeometry chain = build_dimer_chain(1, 12.0, 42.0, 1.0);
    const MultipoleBasis basis{1};
    const FrequencyWindow w{0.045, 0.065};
    const auto run = [&](Exec e) {
      find_characteristic_values(chain, basis, delta, w, 5, {400, 1e-10}, e);
    };
    const double ts = time_ms([&] { run(Exec::Serial); });
    const double tp = time_ms([&] { run(Exec::Parallel); });
    report("frequency scan (N=5, p=1)", ts, tp);
  }
  return 0;
}
