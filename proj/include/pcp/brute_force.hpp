#pragma once

#include <cstdint>
#include <limits>

namespace pcp {

// Scan controls for the quadratic-filter oracle. The default (NaN) box is
// derived from the closed-form optima: a in [-1.5*4/(1-lambda+lambda*gamma)^2, 0],
// c in [-1/lambda, 0]. Tests override the box to probe convex candidates
// (a > 0) and infeasible regions.
struct BruteForceOptions {
  double a_min = std::numeric_limits<double>::quiet_NaN();
  double a_max = std::numeric_limits<double>::quiet_NaN();
  double c_min = std::numeric_limits<double>::quiet_NaN();
  double c_max = std::numeric_limits<double>::quiet_NaN();
  int check_points = 2001;  // x-grid resolution of the admissibility check
  double slack = 1e-12;     // tolerance on the band-edge inequalities
  bool parallel = true;
};

struct BruteForceResult {
  double best_a = 0.0;
  double best_c = 0.0;
  double best_gap = 0.0;
  std::int64_t grid_checks = 0;  // number of full x-grid admissibility checks
};

// Exhaustive scan of quadratics p(x) = (x - lambda)*(a*x - c) on an (a, c)
// lattice with the given spacing; each candidate passing a cheap endpoint
// sign screen is validated against the band conditions on the x-grid, and
// the admissible candidate with the largest endpoint gap wins. Ties go to
// the lexicographically smallest lattice index. Throws EmptyFeasible when
// no lattice point is admissible.
BruteForceResult brute_force_gap(double lambda, double gamma, double grid_step,
                                 const BruteForceOptions& opts = {});

}  // namespace pcp
