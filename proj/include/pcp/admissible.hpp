#pragma once

#include <cstddef>
#include <string>

namespace pcp {

// The pair (lambda, gamma) plus its derived band edges. Valid when
// 0 < lambda < 1, 0 < gamma < 1 and lambda * (1 + gamma) < 1, which makes
// 0 < (1-gamma)*lambda < lambda < (1+gamma)*lambda < 1.
struct ThresholdSpec {
  double lambda = 0.0;
  double gamma = 0.0;

  double low_edge() const { return (1.0 - gamma) * lambda; }
  double high_edge() const { return (1.0 + gamma) * lambda; }
  // Throws InvalidThreshold when the invariants fail.
  void validate() const;
};

enum class FilterKind { Ridge, Poly1, Poly2 };

const char* to_string(FilterKind k);

// A spectrum filter maps eigenvalues of G into [-1, 1] with a zero at lambda:
//   Ridge: 2x/(x+lambda) - 1
//   Poly1: slope * (x - lambda)
//   Poly2: (x - lambda) * (a x - c)
// Polynomial filters built for lambda > 1/2 are reflections q(x) = -p(1-x) of
// the optimal filters at (1-lambda, lambda*gamma/(1-lambda)); their stored
// coefficients are already the reflected ones, so evaluate() needs no branch.
struct SpectrumFilter {
  FilterKind kind = FilterKind::Ridge;
  double lambda = 0.0;  // the threshold this filter is admissible for (= its zero)
  double gamma = 0.0;
  double slope = 0.0;       // Poly1 only
  double quad_a = 0.0;      // Poly2 only
  double quad_c = 0.0;      // Poly2 only
  bool reflected = false;   // built via the reflection transform (lambda > 1/2)

  double evaluate(double x) const;
};

// Score table produced by select_filter. region / b1 / b2 refer to the
// problem actually optimized over: for lambda > 1/2 that is the reflected
// problem (1-lambda, lambda*gamma/(1-lambda)); alpha_r always uses the
// caller's gamma.
struct GapReport {
  double alpha_r = 0.0;
  double alpha_1 = 0.0;
  double alpha_2 = 0.0;
  int region = 0;  // 1..3, the Poly2 branch used (0 when Poly2 is unavailable)
  double b1 = 0.0;
  double b2 = 0.0;
  FilterKind chosen = FilterKind::Ridge;
};

// Optimal degree-1 filter (x - lambda)/(1 - lambda); requires lambda <= 1/2
// (larger thresholds go through reflect()). Gap: lambda*gamma/(1-lambda).
SpectrumFilter poly1(double lambda, double gamma);

// Optimal quadratic filter (x - lambda)(a* x - c*) with region-dependent
// coefficients; lambda must lie in (0, 1/2) — exactly 1/2 raises LambdaHalf
// since the optimal quadratic degenerates to the degree-1 filter there.
SpectrumFilter poly2(double lambda, double gamma);

// The ridge map 2 r_lambda - 1 wrapped in the same interface.
SpectrumFilter ridge_filter(double lambda, double gamma);

// Poly2 branch for (lambda, gamma): 1 on (0, 1/(3+2sqrt2-gamma)],
// 2 on (.., 1-sqrt2/2], 3 above. Boundaries resolve to the lower region.
int region_of(double lambda, double gamma);

// Admissibility gap via the closed forms (agrees with the direct evaluation
// min{-p((1-gamma)lambda), p((1+gamma)lambda)} to 1e-12; reflection preserves it).
double gap(const SpectrumFilter& f);

// Direct-evaluation gap of the same filter at a widened band ratio gamma_x:
// min{-f((1-gamma_x)lambda), f((1+gamma_x)lambda)}. Used by the engines after
// the gamma floor; requires (1+gamma_x)*lambda < 1.
double gap_at(const SpectrumFilter& f, double gamma_x);

// Reflection q(x) = -p(1-x): admissible for (1-lambda, lambda*gamma/(1-lambda))
// with the same gap. Ridge filters are not polynomials -> NotAPolynomial.
SpectrumFilter reflect(const SpectrumFilter& f);

// Thresholds partitioning (0, 1/2) into ridge / poly2 / poly1 regions:
//   b1 = ((5+gamma) - 2 sqrt(4+2gamma)) / (9 + 2gamma + gamma^2)
//   b2 = (2 + 2 sqrt2 - gamma) / (8 + 6 sqrt2 - gamma)
struct BPair {
  double b1 = 0.0;
  double b2 = 0.0;
};
BPair thresholds_b(double gamma);

// Score rule max{alpha_r, 2*alpha_1, alpha_2}; ties (within 1e-12) prefer the
// filter with fewer matvecs per application: Poly1, then Poly2, then Ridge.
// For lambda <= 1/2 the choice provably matches the interval rule:
// Ridge on (0, b1), Poly2 on [b1, b2), Poly1 on [b2, 1/2].
struct Selection {
  SpectrumFilter filter;
  GapReport report;
};
Selection select_filter(double lambda, double gamma);

// Requested filter kind at any lambda in (0, 1): polynomial kinds with
// lambda > 1/2 are built on the reflected problem and mapped back.
SpectrumFilter make_filter(FilterKind kind, double lambda, double gamma);

}  // namespace pcp
