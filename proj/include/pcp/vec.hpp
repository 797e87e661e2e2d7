#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pcp/errors.hpp"

namespace pcp {

// All vectors are plain contiguous doubles; public entry points validate finiteness.
using DenseVector = std::vector<double>;

inline void check_finite(const DenseVector& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
  }
}

inline void check_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension mismatch (" +
                            std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

inline double dot(const DenseVector& a, const DenseVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double nrm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(DenseVector& x, double alpha) {
  for (double& v : x) v *= alpha;
}

}  // namespace pcp
