#include "pcp/ridge.hpp"

#include <cmath>

#include "pcp/errors.hpp"

namespace pcp {

DenseVector ridge_solve(const OperatorHandle& g, double lambda, const DenseVector& u,
                        const RidgeSolverConfig& cfg, RidgeStats* stats) {
  if (!(lambda > 0.0)) throw InvalidThreshold("ridge_solve: lambda must be positive");
  if (!(cfg.eps_prime > 0.0 && cfg.eps_prime <= 1e-2)) {
    throw InvalidArgument("ridge_solve: eps_prime must be in (0, 1e-2]");
  }
  const std::size_t d = g.dim();
  check_same_dim(d, u.size(), "ridge_solve");

  RidgeStats local;
  DenseVector x(d, 0.0);
  const double unorm = nrm2(u);
  if (unorm == 0.0) {
    if (stats) *stats = local;
    return x;
  }
  const double target = cfg.eps_prime * lambda * unorm;
  const std::size_t max_iter =
      cfg.max_iter > 0
          ? cfg.max_iter
          : static_cast<std::size_t>(
                std::ceil(10.0 * std::sqrt(1.0 / lambda) * std::log(1.0 / cfg.eps_prime)));

  DenseVector r = u;      // residual of x = 0
  DenseVector p = u;
  DenseVector ap(d);
  double rs = dot(r, r);
  bool converged = std::sqrt(rs) <= target;

  while (!converged && local.iterations < max_iter) {
    g.apply(p, ap);
    axpy(lambda, p, ap);  // ap = (G + lambda I) p
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) break;  // p vanished; nothing left to gain on a PSD system
    const double step = rs / pap;
    axpy(step, p, x);
    axpy(-step, ap, r);
    const double rs_next = dot(r, r);
    ++local.iterations;
    if (std::sqrt(rs_next) <= target) {
      converged = true;
      break;
    }
    const double beta = rs_next / rs;
    for (std::size_t i = 0; i < d; ++i) p[i] = r[i] + beta * p[i];
    rs = rs_next;
  }

  local.converged = converged || std::sqrt(dot(r, r)) <= target;
  if (stats) *stats = local;
  return x;
}

}  // namespace pcp
