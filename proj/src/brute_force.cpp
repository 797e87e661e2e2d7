#include "pcp/brute_force.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pcp/errors.hpp"

namespace pcp {

namespace {

struct RowBest {
  double gap = -1.0;
  std::int64_t j = -1;
  std::int64_t checks = 0;
};

// Early-exit band check; endpoints first because the common violations are
// p(1) > 1 (c far below a) and p(0) < -1 (c at the box floor).
bool grid_ok(double lambda, double a, double c, double lo, double hi, double plo,
             double phi, const double* xs, int m, double slack) {
  auto ok_at = [&](double x) {
    const double v = (x - lambda) * (a * x - c);
    if (x <= lo) return v >= -1.0 - slack && v <= plo + slack;
    if (x >= hi) return v >= phi - slack && v <= 1.0 + slack;
    return true;
  };
  if (!ok_at(xs[m - 1]) || !ok_at(xs[0])) return false;
  for (int k = 1; k + 1 < m; ++k) {
    if (!ok_at(xs[k])) return false;
  }
  return true;
}

}  // namespace

BruteForceResult brute_force_gap(double lambda, double gamma, double grid_step,
                                 const BruteForceOptions& opts) {
  if (!(lambda > 0.0 && lambda < 0.5)) {
    throw InvalidThreshold("brute_force_gap: lambda must be in (0, 1/2)");
  }
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidThreshold("brute_force_gap: gamma must be in (0, 1)");
  }
  if (!(grid_step > 0.0 && grid_step <= 1e-2)) {
    throw InvalidArgument("brute_force_gap: grid_step must be in (0, 1e-2]");
  }
  if (opts.check_points < 2) {
    throw InvalidArgument("brute_force_gap: check_points must be at least 2");
  }

  const double den = 1.0 - lambda + lambda * gamma;
  const double a_min = std::isnan(opts.a_min) ? -6.0 / (den * den) : opts.a_min;
  const double a_max = std::isnan(opts.a_max) ? 0.0 : opts.a_max;
  const double c_min = std::isnan(opts.c_min) ? -1.0 / lambda : opts.c_min;
  const double c_max = std::isnan(opts.c_max) ? 0.0 : opts.c_max;
  if (!(a_min <= a_max) || !(c_min <= c_max)) {
    throw InvalidArgument("brute_force_gap: empty scan box");
  }

  const double lo = (1.0 - gamma) * lambda;
  const double hi = (1.0 + gamma) * lambda;

  const auto na =
      static_cast<std::int64_t>(std::floor((a_max - a_min) / grid_step + 1e-9)) + 1;
  const auto nc =
      static_cast<std::int64_t>(std::floor((c_max - c_min) / grid_step + 1e-9)) + 1;

  const int m = opts.check_points;
  std::vector<double> xs(m);
  for (int k = 0; k < m; ++k) xs[k] = static_cast<double>(k) / (m - 1);

  // Rows are independent; each slot is written by exactly one iteration, so
  // the result does not depend on the schedule or thread count.
  std::vector<RowBest> rows(na);
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (std::int64_t i = 0; i < na; ++i) {
    const double a = a_min + static_cast<double>(i) * grid_step;
    RowBest rb;
    for (std::int64_t j = 0; j < nc; ++j) {
      const double c = c_min + static_cast<double>(j) * grid_step;
      const double plo = (lo - lambda) * (a * lo - c);
      const double phi = (hi - lambda) * (a * hi - c);
      if (!(plo < 0.0) || !(phi > 0.0)) continue;
      // Both band-edge values decrease strictly in c, so the first admissible
      // candidate in the row carries the row's maximal gap.
      ++rb.checks;
      if (grid_ok(lambda, a, c, lo, hi, plo, phi, xs.data(), m, opts.slack)) {
        rb.gap = std::min(-plo, phi);
        rb.j = j;
        break;
      }
    }
    rows[i] = rb;
  }

  double best = -1.0;
  std::int64_t bi = -1, bj = -1, checks = 0;
  for (std::int64_t i = 0; i < na; ++i) {
    checks += rows[i].checks;
    if (rows[i].j >= 0 && rows[i].gap > best) {
      best = rows[i].gap;
      bi = i;
      bj = rows[i].j;
    }
  }
  if (bi < 0) {
    throw EmptyFeasible("brute_force_gap: no admissible quadratic on the scan box");
  }
  BruteForceResult res;
  res.best_a = a_min + static_cast<double>(bi) * grid_step;
  res.best_c = c_min + static_cast<double>(bj) * grid_step;
  res.best_gap = best;
  res.grid_checks = checks;
  return res;
}

}  // namespace pcp
