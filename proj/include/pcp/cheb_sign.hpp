#pragma once

#include <cstddef>
#include <vector>

namespace pcp {

// Degree-n Chebyshev approximation g_n of the signum function,
//   g_n(x) = x * q_n(1 + kappa - 2 x^2),   kappa = 2 alpha^2,
// where q_n interpolates sqrt(2) / sqrt(1 + kappa - y) at Chebyshev nodes.
// g_n is within eps of sgn on [-1,-alpha] u [alpha,1] and stays inside
// [-1,1] (up to eps) on the transition band once n >= min_degree(alpha, eps).
struct SignApprox {
  std::size_t n = 0;       // degree of q_n
  double alpha = 0.0;      // half-width of the transition band
  double kappa = 0.0;      // 2 * alpha^2, exactly
  std::vector<double> coeffs;  // c_0 .. c_n
};

// Coefficients by the closed-form sum
//   c_k = ((2 - [k==0]) / (n+1)) * sum_j sqrt(2) cos(k t_j) (1 + kappa - cos t_j)^{-1/2},
//   t_j = (j + 1/2) pi / (n+1).
// Deterministic: identical inputs give bitwise-identical coefficient arrays.
SignApprox build_sign_approx(double alpha, std::size_t n);

// Smallest n guaranteeing the eps-approximation on [-1,-alpha] u [alpha,1]:
// ceil((1 / (sqrt(2) alpha)) * ln(3 / (eps alpha^2))), never less than 1.
std::size_t min_degree(double alpha, double eps);

// Scalar evaluation of g_n via the three-term recurrence
// T_{k+1}(y) = 2 y T_k(y) - T_{k-1}(y); the argument y = 1 + kappa - 2x^2 can
// exceed 1 near x = 0, so trigonometric forms are not usable here.
double eval_sign_approx(const SignApprox& s, double x);

}  // namespace pcp
