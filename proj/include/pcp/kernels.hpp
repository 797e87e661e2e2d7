#pragma once

#include <cstddef>

// Dense kernels used by the operator backends and the synthetic generators.
// Each kernel has an OpenMP-parallel entry point and a plain serial reference
// (\*_serial) kept for testing; the parallel versions partition only over
// output rows, so every output element is produced by one thread with a fixed
// summation order and results are bitwise identical to the serial reference.

namespace pcp::kernels {

// Thread cap from the PCP_THREADS environment variable (0 = unset).
int env_thread_cap();
// Apply the PCP_THREADS cap to the OpenMP runtime (no-op when unset or
// when built without OpenMP).
void apply_thread_cap();

// y = A x with A row-major m x n.
void dense_gemv(std::size_t m, std::size_t n, const double* a, const double* x, double* y);
void dense_gemv_serial(std::size_t m, std::size_t n, const double* a, const double* x, double* y);

// y = A^T x with A row-major m x n (y has length n).
void dense_gemv_t(std::size_t m, std::size_t n, const double* a, const double* x, double* y);
void dense_gemv_t_serial(std::size_t m, std::size_t n, const double* a, const double* x, double* y);

// C = V diag(e) V^T with V row-major d x d (columns of V are the basis).
// C is exactly symmetric: the upper triangle is computed and mirrored.
void dense_vdvt(std::size_t d, const double* v, const double* e, double* c);
void dense_vdvt_serial(std::size_t d, const double* v, const double* e, double* c);

}  // namespace pcp::kernels
