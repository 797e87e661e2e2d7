#include "pcp/cheb_sign.hpp"

#include <cmath>
#include <numbers>

#include "pcp/errors.hpp"

namespace pcp {

SignApprox build_sign_approx(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidAlpha("build_sign_approx: alpha must be in (0, 1]");
  }
  SignApprox s;
  s.n = n;
  s.alpha = alpha;
  s.kappa = 2.0 * alpha * alpha;
  s.coeffs.resize(n + 1);

  const double pi = std::numbers::pi;
  const std::size_t m = n + 1;
  // node-dependent factor sqrt(2) * (1 + kappa - cos t_j)^{-1/2}, reused for every k
  std::vector<double> theta(m), base(m);
  for (std::size_t j = 0; j < m; ++j) {
    theta[j] = (static_cast<double>(j) + 0.5) * pi / static_cast<double>(m);
    base[j] = std::sqrt(2.0) / std::sqrt(1.0 + s.kappa - std::cos(theta[j]));
  }
  for (std::size_t k = 0; k <= n; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      sum += std::cos(static_cast<double>(k) * theta[j]) * base[j];
    }
    const double lead = (k == 0 ? 1.0 : 2.0) / static_cast<double>(m);
    s.coeffs[k] = lead * sum;
  }
  return s;
}

std::size_t min_degree(double alpha, double eps) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw InvalidAlpha("min_degree: alpha must be in (0, 1]");
  }
  if (!(eps > 0.0 && eps < 0.5)) {
    throw InvalidEps("min_degree: eps must be in (0, 1/2)");
  }
  const double bound =
      (1.0 / (std::sqrt(2.0) * alpha)) * std::log(3.0 / (eps * alpha * alpha));
  const double up = std::ceil(bound);
  if (up < 1.0) return 1;
  return static_cast<std::size_t>(up);
}

double eval_sign_approx(const SignApprox& s, double x) {
  if (std::abs(x) > 1.0 + 1e-12) {
    throw OutOfRange("eval_sign_approx: |x| exceeds 1 + 1e-12");
  }
  const double y = 1.0 + s.kappa - 2.0 * x * x;
  double t_prev = 1.0;  // T_0(y)
  double acc = s.coeffs[0] * t_prev;
  if (s.n >= 1) {
    double t_cur = y;  // T_1(y)
    acc += s.coeffs[1] * t_cur;
    for (std::size_t k = 2; k <= s.n; ++k) {
      const double t_next = 2.0 * y * t_cur - t_prev;
      t_prev = t_cur;
      t_cur = t_next;
      acc += s.coeffs[k] * t_cur;
    }
  }
  return x * acc;
}

}  // namespace pcp
