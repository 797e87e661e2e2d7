#pragma once

#include <cstddef>
#include <functional>

#include "pcp/operator_handle.hpp"
#include "pcp/vec.hpp"

namespace pcp {

struct RidgeSolverConfig {
  // Relative residual tolerance: stop once ||u - (G + lambda I) x|| <=
  // eps_prime * lambda * ||u||. Combined with ||(G + lambda I)^{-1}|| <= 1/lambda
  // this bounds the solution error by eps_prime * ||u||.
  double eps_prime = 1e-13;
  // Iteration cap; 0 selects ceil(10 * sqrt(1/lambda) * ln(1/eps_prime)).
  std::size_t max_iter = 0;
};

struct RidgeStats {
  std::size_t iterations = 0;
  bool converged = true;
};

// Conjugate gradient for (G + lambda I) x = u started at x = 0; exactly one
// operator application per iteration. Hitting the cap returns the current
// iterate and clears stats->converged instead of throwing.
DenseVector ridge_solve(const OperatorHandle& g, double lambda, const DenseVector& u,
                        const RidgeSolverConfig& cfg, RidgeStats* stats = nullptr);

// Injection point for quick_pcp; tests substitute exact diagonal solves.
using RidgeSolveFn = std::function<DenseVector(
    const OperatorHandle&, double, const DenseVector&, const RidgeSolverConfig&, RidgeStats*)>;

}  // namespace pcp
