#include "pcp/operator_handle.hpp"

#include <cmath>
#include <utility>

#include "pcp/errors.hpp"
#include "pcp/kernels.hpp"

namespace pcp {

OperatorHandle::OperatorHandle(std::size_t dim, ApplyFn apply, bool norm_certified)
    : state_(std::make_shared<State>()) {
  if (dim == 0) throw InvalidArgument("OperatorHandle: dim must be positive");
  if (!apply) throw InvalidArgument("OperatorHandle: apply function required");
  state_->dim = dim;
  state_->fn = std::move(apply);
  state_->certified = norm_certified;
}

void OperatorHandle::apply(const DenseVector& in, DenseVector& out) const {
  if (!state_) throw InvalidArgument("OperatorHandle: empty handle");
  check_same_dim(in.size(), state_->dim, "OperatorHandle::apply input");
  out.resize(state_->dim);
  state_->count.fetch_add(1, std::memory_order_relaxed);
  state_->fn(in.data(), out.data());
}

DenseVector OperatorHandle::apply(const DenseVector& in) const {
  DenseVector out;
  apply(in, out);
  return out;
}

OperatorHandle make_dense_gram_operator(DenseMatrix g, bool norm_certified) {
  if (g.rows != g.cols || g.rows == 0) {
    throw InvalidArgument("make_dense_gram_operator: G must be square and non-empty");
  }
  auto shared = std::make_shared<const DenseMatrix>(std::move(g));
  std::size_t d = shared->rows;
  return OperatorHandle(
      d,
      [shared, d](const double* in, double* out) {
        kernels::dense_gemv(d, d, shared->data.data(), in, out);
      },
      norm_certified);
}

OperatorHandle make_gram_from_a(DenseMatrix a, bool norm_certified) {
  if (a.rows == 0 || a.cols == 0) {
    throw InvalidArgument("make_gram_from_a: A must be non-empty");
  }
  auto shared = std::make_shared<const DenseMatrix>(std::move(a));
  std::size_t m = shared->rows, d = shared->cols;
  return OperatorHandle(
      d,
      [shared, m, d](const double* in, double* out) {
        // scratch is per-call so the handle stays safe to share across threads
        std::vector<double> tmp(m);
        kernels::dense_gemv(m, d, shared->data.data(), in, tmp.data());
        kernels::dense_gemv_t(m, d, shared->data.data(), tmp.data(), out);
      },
      norm_certified);
}

OperatorHandle make_diagonal_operator(DenseVector diag, bool norm_certified) {
  if (diag.empty()) throw InvalidArgument("make_diagonal_operator: empty diagonal");
  auto shared = std::make_shared<const DenseVector>(std::move(diag));
  std::size_t d = shared->size();
  return OperatorHandle(
      d,
      [shared, d](const double* in, double* out) {
        for (std::size_t i = 0; i < d; ++i) out[i] = (*shared)[i] * in[i];
      },
      norm_certified);
}

PowerNormalizeResult power_normalize(const OperatorHandle& raw, double tol) {
  if (!raw.valid()) throw InvalidArgument("power_normalize: empty handle");
  if (!(tol > 0.0 && tol <= 1e-3)) {
    throw InvalidArgument("power_normalize: tol must be in (0, 1e-3]");
  }
  const std::size_t d = raw.dim();

  // Deterministic probe vector; a fixed pseudo-random direction avoids the
  // failure mode of a structured start being orthogonal to the top eigenvector.
  DenseVector v(d);
  std::uint64_t s = 0x9e3779b97f4a7c15ULL ^ (0x2545F4914F6CDD1DULL * (d + 1));
  for (std::size_t i = 0; i < d; ++i) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    v[i] = static_cast<double>(z >> 11) * 0x1.0p-53 - 0.5;
  }
  double nv = nrm2(v);
  scale(v, 1.0 / nv);

  DenseVector gv(d);
  raw.apply(v, gv);
  double ng = nrm2(gv);
  if (ng == 0.0) throw ZeroOperator("power_normalize: G annihilates the probe vector");

  double rho_prev = dot(v, gv);  // Rayleigh quotient of the unit probe
  const std::size_t max_iter = 10 * d;
  double rho = rho_prev;
  bool converged = false;
  for (std::size_t it = 0; it < max_iter; ++it) {
    scale(gv, 1.0 / ng);
    v.swap(gv);
    raw.apply(v, gv);
    ng = nrm2(gv);
    rho = dot(v, gv);
    if (std::abs(rho - rho_prev) < tol * std::abs(rho)) {
      converged = true;
      break;
    }
    if (ng == 0.0) throw ZeroOperator("power_normalize: iterate mapped to zero");
    rho_prev = rho;
  }
  if (!converged) {
    throw NonConvergent("power_normalize: no Rayleigh stagnation after 10*d iterations");
  }
  if (!(rho > 0.0)) {
    throw ZeroOperator("power_normalize: non-positive Rayleigh quotient (operator not PSD?)");
  }

  PowerNormalizeResult res;
  res.sigma1_sq = rho;
  const double inv = 1.0 / rho;  // exact no-op when rho == 1 (IEEE x*1.0 == x)
  OperatorHandle inner = raw;    // shares the underlying state
  res.handle = OperatorHandle(
      d,
      [inner, inv, d](const double* in, double* out) {
        // route through the inner handle's apply to keep a single code path
        DenseVector tmp_in(in, in + d), tmp_out;
        inner.apply(tmp_in, tmp_out);
        for (std::size_t i = 0; i < d; ++i) out[i] = tmp_out[i] * inv;
      },
      true);
  return res;
}

}  // namespace pcp
