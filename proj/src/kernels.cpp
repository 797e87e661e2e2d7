#include "pcp/kernels.hpp"

#include <cstdint>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pcp::kernels {

int env_thread_cap() {
  const char* s = std::getenv("PCP_THREADS");
  if (s == nullptr) return 0;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || v <= 0) return 0;
  return static_cast<int>(v);
}

void apply_thread_cap() {
#ifdef _OPENMP
  int cap = env_thread_cap();
  if (cap > 0 && cap < omp_get_max_threads()) {
    omp_set_num_threads(cap);
  }
#endif
}

void dense_gemv_serial(std::size_t m, std::size_t n, const double* a, const double* x,
                       double* y) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void dense_gemv(std::size_t m, std::size_t n, const double* a, const double* x, double* y) {
  const std::int64_t mi = static_cast<std::int64_t>(m);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < mi; ++i) {
    const double* row = a + static_cast<std::size_t>(i) * n;
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void dense_gemv_t_serial(std::size_t m, std::size_t n, const double* a, const double* x,
                         double* y) {
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[i * n + j] * x[i];
    y[j] = s;
  }
}

void dense_gemv_t(std::size_t m, std::size_t n, const double* a, const double* x, double* y) {
  const std::int64_t nj = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < nj; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += a[i * n + static_cast<std::size_t>(j)] * x[i];
    y[j] = s;
  }
}

namespace {

inline double vdvt_entry(std::size_t d, const double* v, const double* e, std::size_t i,
                         std::size_t j) {
  // C_ij = sum_k V_ik e_k V_jk (rows of V indexed first, columns are eigenvectors)
  double s = 0.0;
  const double* vi = v + i * d;
  const double* vj = v + j * d;
  for (std::size_t k = 0; k < d; ++k) s += vi[k] * e[k] * vj[k];
  return s;
}

}  // namespace

void dense_vdvt_serial(std::size_t d, const double* v, const double* e, double* c) {
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      double s = vdvt_entry(d, v, e, i, j);
      c[i * d + j] = s;
      c[j * d + i] = s;
    }
  }
}

void dense_vdvt(std::size_t d, const double* v, const double* e, double* c) {
  const std::int64_t di = static_cast<std::int64_t>(d);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < di; ++i) {
    for (std::size_t j = static_cast<std::size_t>(i); j < d; ++j) {
      double s = vdvt_entry(d, v, e, static_cast<std::size_t>(i), j);
      c[static_cast<std::size_t>(i) * d + j] = s;
    }
  }
  // mirror the upper triangle so the stored matrix is bitwise symmetric
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      c[j * d + i] = c[i * d + j];
    }
  }
}

}  // namespace pcp::kernels
