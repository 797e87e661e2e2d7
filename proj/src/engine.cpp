#include "pcp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pcp/errors.hpp"

namespace pcp {

double effective_gamma(double gamma, std::size_t n) {
  const double dn = static_cast<double>(n);
  return std::max(gamma, std::log(dn) / dn);
}

namespace {

void validate_pipeline_inputs(const OperatorHandle& g, const DenseVector& chi, std::size_t n) {
  if (!g.valid()) throw InvalidArgument("pcp engine: empty operator handle");
  if (!g.norm_certified()) {
    throw NotNormalized("pcp engine: operator must be certified as spectrum-normalized");
  }
  check_same_dim(g.dim(), chi.size(), "pcp engine");
  check_finite(chi, "pcp engine: chi");
  if (n < 1) throw InvalidArgument("pcp engine: Chebyshev degree must be >= 1");
}

// out = p(G) v. Poly1: slope * (G v - lambda v). Poly2 fixes the order
// t = G v - lambda v, out = a G t - c t so runs are bitwise reproducible.
void apply_poly_filter(const OperatorHandle& g, const SpectrumFilter& f, const DenseVector& v,
                       DenseVector& out, DenseVector& scratch) {
  const std::size_t d = v.size();
  g.apply(v, scratch);
  if (f.kind == FilterKind::Poly1) {
    for (std::size_t i = 0; i < d; ++i) out[i] = f.slope * (scratch[i] - f.lambda * v[i]);
    return;
  }
  for (std::size_t i = 0; i < d; ++i) out[i] = scratch[i] - f.lambda * v[i];
  g.apply(out, scratch);
  for (std::size_t i = 0; i < d; ++i) out[i] = f.quad_a * scratch[i] - f.quad_c * out[i];
}

struct ClenshawCore {
  DenseVector b0;
  DenseVector w;
};

// b_{n+1} = 0, b_n = c_n chi; for r = n-1..0:
//   w   = (1+kappa) b_{r+1} - 2 M (M b_{r+1})
//   b_r = 2 w - b_{r+2} + c_r chi
// Rotates three vectors; apply_m(v, out) must leave v untouched.
template <typename ApplyM>
ClenshawCore clenshaw_loop(const SignApprox& s, const DenseVector& chi, ApplyM&& apply_m) {
  const std::size_t d = chi.size();
  const auto& c = s.coeffs;
  ClenshawCore core;
  DenseVector b2(d, 0.0);
  DenseVector b1(d);
  core.w.assign(d, 0.0);
  DenseVector t1(d), t2(d);
  for (std::size_t i = 0; i < d; ++i) b1[i] = c[s.n] * chi[i];
  const double onek = 1.0 + s.kappa;
  for (std::size_t r = s.n; r-- > 0;) {
    apply_m(b1, t1);
    apply_m(t1, t2);
    for (std::size_t i = 0; i < d; ++i) core.w[i] = onek * b1[i] - 2.0 * t2[i];
    for (std::size_t i = 0; i < d; ++i) b2[i] = 2.0 * core.w[i] - b2[i] + c[r] * chi[i];
    std::swap(b2, b1);
  }
  core.b0 = std::move(b1);
  return core;
}

}  // namespace

ProjectionReport poly_pcp(const OperatorHandle& g, const DenseVector& chi,
                          const SpectrumFilter& filter, std::size_t n) {
  validate_pipeline_inputs(g, chi, n);
  if (filter.kind == FilterKind::Ridge) {
    throw NotAPolynomial("poly_pcp: requires a degree-1 or degree-2 filter");
  }
  const std::size_t d = g.dim();

  double gamma_eff = effective_gamma(filter.gamma, n);
  if (filter.lambda > 0.5) {
    // Keep the widened band inside [0, 1): gamma_eff < (1 - lambda) / lambda.
    const double limit = (1.0 - filter.lambda) / filter.lambda;
    gamma_eff = std::min(gamma_eff, filter.gamma + 0.999 * (limit - filter.gamma));
  }
  const double alpha = gap_at(filter, gamma_eff);
  if (!(alpha > 0.0)) throw InvalidAlpha("poly_pcp: filter gap must be positive");
  const SignApprox s = build_sign_approx(alpha, n);

  const std::uint64_t before = g.matvec_count();
  DenseVector scratch(d);
  auto apply_m = [&](const DenseVector& v, DenseVector& out) {
    apply_poly_filter(g, filter, v, out, scratch);
  };
  ClenshawCore core = clenshaw_loop(s, chi, apply_m);
  DenseVector diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = core.b0[i] - core.w[i];
  DenseVector u(d);
  apply_m(diff, u);

  ProjectionReport rep;
  rep.zeta.resize(d);
  for (std::size_t i = 0; i < d; ++i) rep.zeta[i] = 0.5 * (u[i] + chi[i]);
  rep.filter_kind = filter.kind;
  rep.degree = n;
  rep.lambda = filter.lambda;
  rep.gamma = filter.gamma;
  rep.gamma_eff = gamma_eff;
  rep.alpha = alpha;
  rep.kappa = s.kappa;
  rep.matvecs = g.matvec_count() - before;

  const std::uint64_t deg = filter.kind == FilterKind::Poly2 ? 2 : 1;
  const std::uint64_t expected = (2 * static_cast<std::uint64_t>(n) + 1) * deg;
  if (rep.matvecs != expected) {
    throw Error("poly_pcp: matvec count deviates from (2n+1)*deg");
  }
  return rep;
}

ProjectionReport quick_pcp(const OperatorHandle& g, const DenseVector& chi, double lambda,
                           double gamma, std::size_t n, const RidgeSolverConfig& cfg,
                           QuickPcpVariant variant, const RidgeSolveFn& solver) {
  validate_pipeline_inputs(g, chi, n);
  if (!(lambda > 0.0 && lambda < 1.0) || !(gamma > 0.0 && gamma < 1.0) ||
      !(lambda * (1.0 + gamma) < 1.0)) {
    throw InvalidThreshold("quick_pcp: need lambda, gamma in (0,1) with lambda*(1+gamma) < 1");
  }
  const std::size_t d = g.dim();

  const double gamma_eff = effective_gamma(gamma, n);
  const double alpha = gamma_eff / (2.0 + gamma_eff);
  const SignApprox s = build_sign_approx(alpha, n);

  const bool builtin = !solver;
  std::size_t cg_total = 0;
  std::size_t solves = 0;
  bool all_converged = true;
  const std::uint64_t before = g.matvec_count();

  DenseVector band(d);
  auto solve_band = [&](const DenseVector& rhs, DenseVector& out) {
    RidgeStats st;
    DenseVector x = builtin ? ridge_solve(g, lambda, rhs, cfg, &st)
                            : solver(g, lambda, rhs, cfg, &st);
    cg_total += st.iterations;
    all_converged = all_converged && st.converged;
    ++solves;
    out.swap(x);
  };
  auto apply_m = [&](const DenseVector& v, DenseVector& out) {
    g.apply(v, band);
    for (std::size_t i = 0; i < d; ++i) band[i] -= lambda * v[i];
    solve_band(band, out);
  };

  ClenshawCore core = clenshaw_loop(s, chi, apply_m);
  DenseVector u(d);
  if (variant == QuickPcpVariant::AlgebraicFinal) {
    DenseVector diff(d);
    for (std::size_t i = 0; i < d; ++i) diff[i] = core.b0[i] - core.w[i];
    apply_m(diff, u);
  } else {
    g.apply(core.b0, band);
    for (std::size_t i = 0; i < d; ++i) band[i] = band[i] - lambda * core.b0[i] - core.w[i];
    solve_band(band, u);
  }

  ProjectionReport rep;
  rep.zeta.resize(d);
  for (std::size_t i = 0; i < d; ++i) rep.zeta[i] = 0.5 * (u[i] + chi[i]);
  rep.filter_kind = FilterKind::Ridge;
  rep.degree = n;
  rep.cg_iterations = cg_total;
  rep.ridge_solves = solves;
  rep.lambda = lambda;
  rep.gamma = gamma;
  rep.gamma_eff = gamma_eff;
  rep.alpha = alpha;
  rep.kappa = s.kappa;
  rep.eps_prime = cfg.eps_prime;
  rep.ridge_converged = all_converged;
  rep.matvecs = g.matvec_count() - before;

  if (solves != 2 * n + 1) {
    throw Error("quick_pcp: ridge solve count deviates from 2n+1");
  }
  if (builtin && rep.matvecs != static_cast<std::uint64_t>(solves) + cg_total) {
    throw Error("quick_pcp: matvec count deviates from (2n+1) + total CG iterations");
  }
  return rep;
}

ProjectionReport project(const OperatorHandle& g, const DenseVector& chi, double lambda,
                         double gamma, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw InvalidEps("project: eps must be in (0, 1/2)");
  const Selection sel = select_filter(lambda, gamma);

  double alpha0 = 0.0;
  switch (sel.report.chosen) {
    case FilterKind::Ridge: alpha0 = sel.report.alpha_r; break;
    case FilterKind::Poly1: alpha0 = sel.report.alpha_1; break;
    case FilterKind::Poly2: alpha0 = sel.report.alpha_2; break;
  }
  const std::size_t n = min_degree(alpha0, eps);

  if (sel.report.chosen == FilterKind::Ridge) {
    RidgeSolverConfig cfg;
    cfg.eps_prime = std::min(1e-13, eps * gamma / (100.0 * static_cast<double>(n)));
    return quick_pcp(g, chi, lambda, gamma, n, cfg);
  }
  return poly_pcp(g, chi, sel.filter, n);
}

}  // namespace pcp
