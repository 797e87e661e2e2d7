#pragma once

#include <cstddef>
#include <cstdint>

#include "pcp/admissible.hpp"
#include "pcp/cheb_sign.hpp"
#include "pcp/operator_handle.hpp"
#include "pcp/ridge.hpp"
#include "pcp/vec.hpp"

namespace pcp {

struct ProjectionReport {
  DenseVector zeta;
  FilterKind filter_kind = FilterKind::Ridge;
  std::size_t degree = 0;         // Chebyshev degree n
  std::uint64_t matvecs = 0;      // operator applications observed during the call
  std::size_t cg_iterations = 0;  // summed over all ridge solves (0 for poly filters)
  std::size_t ridge_solves = 0;   // 0 for poly filters, 2n+1 for the ridge pipeline
  double lambda = 0.0;
  double gamma = 0.0;
  double gamma_eff = 0.0;
  double alpha = 0.0;       // band half-width fed to the Chebyshev stage
  double kappa = 0.0;       // 2 * alpha^2
  double eps_prime = 0.0;   // ridge tolerance actually used (0 for poly filters)
  bool ridge_converged = true;
};

// The printed final line of the ridge pipeline reads u = R(G, lambda,
// (G - lambda I) b0 - w), which does not match the M(b0 - w) shape of the
// polynomial pipeline's last step. AlgebraicFinal uses M(b0 - w); the
// printed form stays available for comparison.
enum class QuickPcpVariant {
  AlgebraicFinal,
  PrintedFinal,
};

// Clenshaw evaluation of zeta = (chi + g_n(p(G)) chi) / 2 for a degree-1/2
// spectrum filter p. Requires a norm-certified operator and n >= 1.
// Performs exactly (2n+1) * deg(p) operator applications and verifies that
// count against the operator's own counter.
ProjectionReport poly_pcp(const OperatorHandle& g, const DenseVector& chi,
                          const SpectrumFilter& filter, std::size_t n);

// Same recurrence with the ridge filter M z ~ (G + lambda I)^{-1}(G - lambda I) z,
// each application costing one band matvec plus one ridge solve (2n+1 solves
// total). A non-empty `solver` replaces the built-in conjugate gradient; the
// matvec/CG accounting cross-check only runs with the built-in solver.
ProjectionReport quick_pcp(const OperatorHandle& g, const DenseVector& chi, double lambda,
                           double gamma, std::size_t n, const RidgeSolverConfig& cfg,
                           QuickPcpVariant variant = QuickPcpVariant::AlgebraicFinal,
                           const RidgeSolveFn& solver = {});

// Full pipeline: pick the filter by gap scores, size the Chebyshev degree for
// the target eps, set the ridge tolerance min(1e-13, eps*gamma/(100 n)), and
// dispatch. The report echoes every derived parameter.
ProjectionReport project(const OperatorHandle& g, const DenseVector& chi, double lambda,
                         double gamma, double eps);

// Band floor shared by both pipelines: max(gamma, ln(n)/n).
double effective_gamma(double gamma, std::size_t n);

}  // namespace pcp
