// Compares the serial reference kernels against the OpenMP ones: the
// characteristic-determinant grid scan and the reference-table study.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stbeam/experiments.hpp"

namespace {

using namespace stbeam;

double seconds(const std::function<void()>& work) {
  const auto start = std::chrono::steady_clock::now();
  work();
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  return elapsed.count();
}

double best_of(int repeats, const std::function<void()>& work) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const double t = seconds(work);
    if (t < best) best = t;
  }
  return best;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP; parallel == serial)\n");
#endif

  // Fine characteristic scan on a mid-table configuration.
  const PhysicalConfig config = reference_structure(45.0, 600.0, 10000.0, 8.0);
  const CharacteristicContext ctx{nondimensionalize(config), {}, SignConvention::derived};
  ScanSettings scan;
  scan.step = 0.002;  // 10x finer than the default; ~6000 grid points

  const auto scan_with = [&](ExecutionMode mode) {
    ScanSettings s = scan;
    s.mode = mode;
    const auto f = [&](double trial) { return characteristic_value(trial, ctx); };
    (void)scan_fourth_power_roots(f, 6, s);
  };
  const double scan_serial = best_of(3, [&] { scan_with(ExecutionMode::serial); });
  const double scan_parallel = best_of(3, [&] { scan_with(ExecutionMode::parallel); });
  std::printf("determinant scan (6001 points): serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
              1e3 * scan_serial, 1e3 * scan_parallel, scan_serial / scan_parallel);

  // Full table study: 2 tables x 4 configurations x 30 cells.
  const auto tables_with = [&](ExecutionMode mode) {
    (void)reproduce_table(TableId::table2, mode);
    (void)reproduce_table(TableId::table3, mode);
  };
  const double table_serial = best_of(3, [&] { tables_with(ExecutionMode::serial); });
  const double table_parallel = best_of(3, [&] { tables_with(ExecutionMode::parallel); });
  std::printf("table study (240 solves):       serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
              1e3 * table_serial, 1e3 * table_parallel, table_serial / table_parallel);
  return 0;
}
