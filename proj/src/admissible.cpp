#include "pcp/admissible.hpp"

#include <cmath>

#include "pcp/errors.hpp"

namespace pcp {

namespace {

const double kSqrt2 = std::sqrt(2.0);
const double kThreePlus2Sqrt2 = 3.0 + 2.0 * kSqrt2;

void require_valid(double lambda, double gamma, const char* what) {
  if (!(lambda > 0.0 && lambda < 1.0) || !(gamma > 0.0 && gamma < 1.0) ||
      !(lambda * (1.0 + gamma) < 1.0)) {
    throw InvalidThreshold(std::string(what) +
                           ": need lambda, gamma in (0,1) with lambda*(1+gamma) < 1");
  }
}

}  // namespace

void ThresholdSpec::validate() const { require_valid(lambda, gamma, "ThresholdSpec"); }

const char* to_string(FilterKind k) {
  switch (k) {
    case FilterKind::Ridge: return "ridge";
    case FilterKind::Poly1: return "poly1";
    case FilterKind::Poly2: return "poly2";
  }
  return "?";
}

double SpectrumFilter::evaluate(double x) const {
  switch (kind) {
    case FilterKind::Ridge:
      return 2.0 * x / (x + lambda) - 1.0;
    case FilterKind::Poly1:
      return slope * (x - lambda);
    case FilterKind::Poly2:
      return (x - lambda) * (quad_a * x - quad_c);
  }
  return 0.0;
}

SpectrumFilter poly1(double lambda, double gamma) {
  require_valid(lambda, gamma, "poly1");
  if (lambda > 0.5) {
    throw InvalidThreshold("poly1: lambda > 1/2; build at 1-lambda and reflect");
  }
  SpectrumFilter f;
  f.kind = FilterKind::Poly1;
  f.lambda = lambda;
  f.gamma = gamma;
  f.slope = 1.0 / (1.0 - lambda);
  return f;
}

int region_of(double lambda, double gamma) {
  require_valid(lambda, gamma, "region_of");
  if (!(lambda < 0.5)) {
    throw InvalidThreshold("region_of: lambda must be in (0, 1/2)");
  }
  const double r12 = 1.0 / (kThreePlus2Sqrt2 - gamma);
  const double r23 = 1.0 - kSqrt2 / 2.0;
  if (lambda <= r12) return 1;
  if (lambda <= r23) return 2;
  return 3;
}

SpectrumFilter poly2(double lambda, double gamma) {
  require_valid(lambda, gamma, "poly2");
  if (lambda == 0.5) {
    throw LambdaHalf("poly2: at lambda = 1/2 the optimal quadratic degenerates to poly1");
  }
  if (lambda > 0.5) {
    throw InvalidThreshold("poly2: lambda > 1/2; build at 1-lambda and reflect");
  }
  SpectrumFilter f;
  f.kind = FilterKind::Poly2;
  f.lambda = lambda;
  f.gamma = gamma;
  switch (region_of(lambda, gamma)) {
    case 1: {
      const double den = 1.0 - lambda + lambda * gamma;
      f.quad_a = -4.0 / (den * den);
      f.quad_c = -4.0 * (1.0 + lambda * gamma) / (den * den);
      break;
    }
    case 2:
      f.quad_a = -1.0 / (kThreePlus2Sqrt2 * lambda * lambda);
      f.quad_c = -1.0 / lambda;
      break;
    default:
      f.quad_a = (2.0 * lambda - 1.0) / ((1.0 - lambda) * lambda);
      f.quad_c = -1.0 / lambda;
      break;
  }
  return f;
}

SpectrumFilter ridge_filter(double lambda, double gamma) {
  require_valid(lambda, gamma, "ridge_filter");
  SpectrumFilter f;
  f.kind = FilterKind::Ridge;
  f.lambda = lambda;
  f.gamma = gamma;
  return f;
}

namespace {

double alpha_ridge(double gamma) { return gamma / (2.0 + gamma); }

double alpha_one(double lambda, double gamma) { return lambda * gamma / (1.0 - lambda); }

double alpha_two(double lambda, double gamma) {
  switch (region_of(lambda, gamma)) {
    case 1: {
      const double den = 1.0 + lambda * gamma - lambda;
      return 4.0 * gamma * lambda * (1.0 - lambda) / (den * den);
    }
    case 2:
      return gamma * (2.0 + 2.0 * kSqrt2 - gamma) / kThreePlus2Sqrt2;
    default:
      return lambda * (2.0 * lambda - 1.0) * gamma * (1.0 + gamma) / (1.0 - lambda) + gamma;
  }
}

}  // namespace

double gap(const SpectrumFilter& f) {
  // Reflection preserves the gap, so reflected filters report the base
  // problem's closed form evaluated at (1-lambda, lambda*gamma/(1-lambda)).
  double lam = f.lambda;
  double gam = f.gamma;
  if (f.reflected) {
    const double lam_base = 1.0 - f.lambda;
    gam = f.lambda * f.gamma / (1.0 - f.lambda);
    lam = lam_base;
  }
  switch (f.kind) {
    case FilterKind::Ridge:
      return alpha_ridge(f.gamma);
    case FilterKind::Poly1:
      return alpha_one(lam, gam);
    case FilterKind::Poly2:
      return alpha_two(lam, gam);
  }
  return 0.0;
}

double gap_at(const SpectrumFilter& f, double gamma_x) {
  if (!(gamma_x > 0.0)) throw InvalidThreshold("gap_at: gamma_x must be positive");
  const double lo = (1.0 - gamma_x) * f.lambda;
  const double hi = (1.0 + gamma_x) * f.lambda;
  if (!(lo >= 0.0 && hi < 1.0)) {
    throw InvalidThreshold("gap_at: widened band leaves [0, 1)");
  }
  return std::min(-f.evaluate(lo), f.evaluate(hi));
}

SpectrumFilter reflect(const SpectrumFilter& f) {
  if (f.kind == FilterKind::Ridge) {
    throw NotAPolynomial("reflect: ridge filter is not a polynomial");
  }
  SpectrumFilter q;
  q.kind = f.kind;
  q.lambda = 1.0 - f.lambda;
  q.gamma = f.lambda * f.gamma / (1.0 - f.lambda);
  q.reflected = !f.reflected;
  if (f.kind == FilterKind::Poly1) {
    // -slope*((1-x) - lambda) = slope*(x - (1-lambda))
    q.slope = f.slope;
  } else {
    // -(1-x-lambda)(a(1-x)-c) = (x-(1-lambda))(-a x + (a - c))
    q.quad_a = -f.quad_a;
    q.quad_c = f.quad_c - f.quad_a;
  }
  return q;
}

BPair thresholds_b(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw InvalidThreshold("thresholds_b: gamma must be in (0, 1)");
  }
  BPair b;
  b.b1 = ((5.0 + gamma) - 2.0 * std::sqrt(4.0 + 2.0 * gamma)) /
         (9.0 + 2.0 * gamma + gamma * gamma);
  b.b2 = (2.0 + 2.0 * kSqrt2 - gamma) / (8.0 + 6.0 * kSqrt2 - gamma);
  return b;
}

SpectrumFilter make_filter(FilterKind kind, double lambda, double gamma) {
  if (kind == FilterKind::Ridge) return ridge_filter(lambda, gamma);
  require_valid(lambda, gamma, "make_filter");
  if (lambda > 0.5) {
    const double lam = 1.0 - lambda;
    const double gam = lambda * gamma / (1.0 - lambda);
    return reflect(kind == FilterKind::Poly1 ? poly1(lam, gam) : poly2(lam, gam));
  }
  return kind == FilterKind::Poly1 ? poly1(lambda, gamma) : poly2(lambda, gamma);
}

Selection select_filter(double lambda, double gamma) {
  require_valid(lambda, gamma, "select_filter");

  // For lambda > 1/2 the polynomial candidates are built on the reflected
  // problem and mapped back; the ridge score is lambda-free and always uses
  // the caller's gamma.
  const bool reflect_side = lambda > 0.5;
  const double lam_opt = reflect_side ? 1.0 - lambda : lambda;
  const double gam_opt = reflect_side ? lambda * gamma / (1.0 - lambda) : gamma;

  GapReport rep;
  rep.alpha_r = alpha_ridge(gamma);
  rep.alpha_1 = alpha_one(lam_opt, gam_opt);
  const bool have_poly2 = lam_opt < 0.5;  // exactly 1/2 degenerates to poly1
  rep.alpha_2 = have_poly2 ? alpha_two(lam_opt, gam_opt) : 0.0;
  rep.region = have_poly2 ? region_of(lam_opt, gam_opt) : 0;
  const BPair b = thresholds_b(gam_opt);
  rep.b1 = b.b1;
  rep.b2 = b.b2;

  const double score_r = rep.alpha_r;
  const double score_1 = 2.0 * rep.alpha_1;
  const double score_2 = have_poly2 ? rep.alpha_2 : -1.0;
  const double best = std::max(score_r, std::max(score_1, score_2));
  const double tie = 1e-12;

  Selection sel;
  if (score_1 >= best - tie) {
    rep.chosen = FilterKind::Poly1;
    SpectrumFilter f = poly1(lam_opt, gam_opt);
    sel.filter = reflect_side ? reflect(f) : f;
  } else if (score_2 >= best - tie) {
    rep.chosen = FilterKind::Poly2;
    SpectrumFilter f = poly2(lam_opt, gam_opt);
    sel.filter = reflect_side ? reflect(f) : f;
  } else {
    rep.chosen = FilterKind::Ridge;
    sel.filter = ridge_filter(lambda, gamma);
  }
  sel.report = rep;
  return sel;
}

}  // namespace pcp
