#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

#include "pcp/dense_matrix.hpp"
#include "pcp/vec.hpp"

namespace pcp {

// Matvec-only view of a symmetric PSD operator G (conceptually A^T A).
// The engine never reads matrix entries; dense, diagonal and A-backed
// backends all go through the same apply() interface.
//
// Handles share state through a shared_ptr, so copies are cheap and the
// matvec counter is common to all copies. The counter is atomic; everything
// else is immutable after construction, so handles may be shared across
// threads freely.
class OperatorHandle {
 public:
  // apply(in, out): out = G * in; in/out are distinct buffers of length dim.
  using ApplyFn = std::function<void(const double* in, double* out)>;

  OperatorHandle() = default;
  OperatorHandle(std::size_t dim, ApplyFn apply, bool norm_certified);

  std::size_t dim() const { return state_->dim; }
  bool norm_certified() const { return state_->certified; }

  // out = G * in; increments the matvec counter once per call.
  void apply(const DenseVector& in, DenseVector& out) const;
  DenseVector apply(const DenseVector& in) const;

  std::uint64_t matvec_count() const { return state_->count.load(std::memory_order_relaxed); }
  void reset_matvec_count() const { state_->count.store(0, std::memory_order_relaxed); }

  bool valid() const { return static_cast<bool>(state_); }

 private:
  struct State {
    std::size_t dim = 0;
    ApplyFn fn;
    bool certified = false;
    mutable std::atomic<std::uint64_t> count{0};
  };
  std::shared_ptr<State> state_;
};

// Free-function spellings used throughout the tests and CLI.
inline std::uint64_t matvec_count(const OperatorHandle& h) { return h.matvec_count(); }
inline void reset_matvec_count(const OperatorHandle& h) { h.reset_matvec_count(); }

// Backends. Matrices are copied into shared storage owned by the handle.
OperatorHandle make_dense_gram_operator(DenseMatrix g, bool norm_certified);
// G v = A^T (A v) for a rectangular A (m x d); counts one matvec per G-application.
OperatorHandle make_gram_from_a(DenseMatrix a, bool norm_certified);
OperatorHandle make_diagonal_operator(DenseVector diag, bool norm_certified);

struct PowerNormalizeResult {
  OperatorHandle handle;  // G / sigma1^2, norm_certified = true
  double sigma1_sq = 0.0;
};

// Estimate sigma1^2 = largest eigenvalue of G by power iteration (Rayleigh
// quotients, relative stagnation < tol) and return the rescaled operator.
// Throws NonConvergent after 10*d iterations and ZeroOperator when the first
// probe image vanishes.
PowerNormalizeResult power_normalize(const OperatorHandle& raw, double tol);

}  // namespace pcp
