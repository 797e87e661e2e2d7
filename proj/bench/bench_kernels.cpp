// Timing comparison of the OpenMP kernels against their serial references,
// plus the brute-force admissibility scan in both modes. Results are
// wall-clock medians; speedups near 1.0 are expected on a single core.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <vector>

#include "pcp/brute_force.hpp"
#include "pcp/kernels.hpp"
#include "pcp/testbed.hpp"

using namespace pcp;

namespace {

double median_seconds(int reps, const std::function<void()>& body) {
  std::vector<double> t(reps);
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    t[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  std::sort(t.begin(), t.end());
  return t[reps / 2];
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s %12.6f s %12.6f s %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
  kernels::apply_thread_cap();

  const std::size_t d = 1200;
  Rng rng(7);
  std::vector<double> a(d * d), x(d), y(d), e(d), c(d * d);
  for (auto& v : a) v = rng.normal();
  for (auto& v : x) v = rng.normal();
  for (std::size_t i = 0; i < d; ++i) e[i] = rng.uniform();

  std::printf("%-28s %14s %14s %9s\n", "kernel", "serial", "parallel", "speedup");

  report("dense_gemv (1200x1200)",
         median_seconds(9, [&] { kernels::dense_gemv_serial(d, d, a.data(), x.data(), y.data()); }),
         median_seconds(9, [&] { kernels::dense_gemv(d, d, a.data(), x.data(), y.data()); }));

  report("dense_gemv_t (1200x1200)",
         median_seconds(9, [&] { kernels::dense_gemv_t_serial(d, d, a.data(), x.data(), y.data()); }),
         median_seconds(9, [&] { kernels::dense_gemv_t(d, d, a.data(), x.data(), y.data()); }));

  const std::size_t dv = 400;
  report("dense_vdvt (400x400)",
         median_seconds(5, [&] { kernels::dense_vdvt_serial(dv, a.data(), e.data(), c.data()); }),
         median_seconds(5, [&] { kernels::dense_vdvt(dv, a.data(), e.data(), c.data()); }));

  BruteForceOptions serial_opts;
  serial_opts.parallel = false;
  report("brute_force_gap (5e-3 grid)",
         median_seconds(3, [&] { brute_force_gap(0.25, 0.3, 5e-3, serial_opts); }),
         median_seconds(3, [&] { brute_force_gap(0.25, 0.3, 5e-3); }));

  return 0;
}
