#include "pcp/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <vector>

#include "pcp/errors.hpp"
#include "pcp/kernels.hpp"

namespace pcp {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Rng::normal() {
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

namespace {

// C = B^T B, exploiting symmetry; row partition keeps the result independent
// of the thread count.
DenseMatrix gram_of(const DenseMatrix& b) {
  const std::size_t m = b.rows, d = b.cols;
  DenseMatrix c(d, d);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(d); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += b.at(k, i) * b.at(k, j);
      c.at(i, j) = s;
      c.at(j, i) = s;
    }
  }
  return c;
}

void sort_pairs_desc(DenseVector& e, DenseMatrix& v) {
  const std::size_t d = e.size();
  std::vector<std::size_t> perm(d);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    if (e[a] != e[b]) return e[a] > e[b];
    return a < b;
  });
  DenseVector es(d);
  DenseMatrix vs(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    es[j] = e[perm[j]];
    for (std::size_t i = 0; i < d; ++i) vs.at(i, j) = v.at(i, perm[j]);
  }
  e = std::move(es);
  v = std::move(vs);
}

}  // namespace

void jacobi_eigh(const DenseMatrix& g, DenseVector& eigenvalues, DenseMatrix& v,
                 int max_sweeps) {
  if (g.rows != g.cols || g.rows == 0) {
    throw InvalidArgument("jacobi_eigh: matrix must be square and non-empty");
  }
  const std::size_t d = g.rows;
  DenseMatrix a = g;
  v = DenseMatrix(d, d);
  for (std::size_t i = 0; i < d; ++i) v.at(i, i) = 1.0;

  double fro = 0.0;
  for (double x : a.data) fro += x * x;
  fro = std::sqrt(fro);
  const double tol = 1e-14 * fro;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) s += 2.0 * a.at(p, q) * a.at(p, q);
    return std::sqrt(s);
  };

  bool done = fro == 0.0 || off_norm() <= tol;
  for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
    for (std::size_t p = 0; p + 1 < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a.at(p, q);
        if (std::abs(apq) < 1e-280) continue;
        const double tau = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(tau * tau + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        a.at(p, p) -= t * apq;
        a.at(q, q) += t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
          if (k == p || k == q) continue;
          const double akp = a.at(k, p);
          const double akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(p, k) = a.at(k, p);
          a.at(k, q) = s * akp + c * akq;
          a.at(q, k) = a.at(k, q);
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v.at(k, p);
          const double vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
    done = off_norm() <= tol;
  }
  if (!done) {
    throw NonConvergent("jacobi_eigh: off-diagonal mass did not reach tolerance");
  }
  eigenvalues.resize(d);
  for (std::size_t i = 0; i < d; ++i) eigenvalues[i] = a.at(i, i);
  sort_pairs_desc(eigenvalues, v);
}

DenseMatrix random_orthogonal(std::size_t d, Rng& rng) {
  DenseMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m.at(i, j) = rng.normal();

  // Householder QR; reflectors stay in the lower part of m, R's diagonal in rdiag.
  std::vector<double> rdiag(d, 0.0);
  std::vector<double> beta(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    double sigma = 0.0;
    for (std::size_t i = k; i < d; ++i) sigma += m.at(i, k) * m.at(i, k);
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) {
      rdiag[k] = 0.0;
      continue;
    }
    const double alpha = m.at(k, k) >= 0.0 ? -sigma : sigma;
    m.at(k, k) -= alpha;  // v = x - alpha e1 occupies m(k:, k)
    rdiag[k] = alpha;
    double vtv = 0.0;
    for (std::size_t i = k; i < d; ++i) vtv += m.at(i, k) * m.at(i, k);
    if (vtv == 0.0) continue;
    beta[k] = 2.0 / vtv;
    for (std::size_t j = k + 1; j < d; ++j) {
      double dotv = 0.0;
      for (std::size_t i = k; i < d; ++i) dotv += m.at(i, k) * m.at(i, j);
      const double f = beta[k] * dotv;
      for (std::size_t i = k; i < d; ++i) m.at(i, j) -= f * m.at(i, k);
    }
  }

  // Q = H_0 H_1 ... H_{d-1}, accumulated right-to-left onto the identity.
  DenseMatrix q(d, d);
  for (std::size_t i = 0; i < d; ++i) q.at(i, i) = 1.0;
  for (std::size_t k = d; k-- > 0;) {
    if (beta[k] == 0.0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      double dotv = 0.0;
      for (std::size_t i = k; i < d; ++i) dotv += m.at(i, k) * q.at(i, j);
      const double f = beta[k] * dotv;
      for (std::size_t i = k; i < d; ++i) q.at(i, j) -= f * m.at(i, k);
    }
  }

  // Haar distribution needs a positive R diagonal.
  for (std::size_t k = 0; k < d; ++k) {
    if (rdiag[k] < 0.0) {
      for (std::size_t i = 0; i < d; ++i) q.at(i, k) = -q.at(i, k);
    }
  }
  return q;
}

DenseVector random_unit_vector(std::size_t d, Rng& rng) {
  DenseVector x(d);
  double norm = 0.0;
  do {
    for (auto& xi : x) xi = rng.normal();
    norm = nrm2(x);
  } while (norm == 0.0);
  scale(x, 1.0 / norm);
  return x;
}

GeneratedMatrix gen_matrix(const SyntheticSpec& spec) {
  if (spec.dim < 2) throw InvalidArgument("gen_matrix: dim must be at least 2");
  if (!(spec.lambda > 0.0 && spec.lambda < 1.0) || !(spec.gamma > 0.0 && spec.gamma < 1.0) ||
      !(spec.lambda * (1.0 + spec.gamma) < 1.0)) {
    throw InvalidThreshold("gen_matrix: need lambda, gamma in (0,1) with lambda*(1+gamma) < 1");
  }
  const std::size_t d = spec.dim;
  const double lo = (1.0 - spec.gamma) * spec.lambda;
  const double hi = (1.0 + spec.gamma) * spec.lambda;
  Rng rng(spec.seed);

  GeneratedMatrix out;
  DenseVector e(d);
  DenseMatrix v;

  if (spec.dist == EigenDist::UniformEigen) {
    const std::size_t n_low = (d + 1) / 2;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_low; ++i, ++idx) {
      const double sv = rng.uniform(0.0, std::sqrt(lo));
      e[idx] = sv * sv;
    }
    for (std::size_t i = 0; i + n_low + 1 < d; ++i, ++idx) {
      const double sv = rng.uniform(std::sqrt(hi), 1.0);
      e[idx] = sv * sv;
    }
    e[idx] = 1.0;
    v = random_orthogonal(d, rng);
  } else {
    DenseMatrix b(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) b.at(i, j) = rng.normal();
    jacobi_eigh(gram_of(b), e, v);
    const double top = e[0];
    if (!(top > 0.0)) throw ZeroOperator("gen_matrix: sample Gram matrix is singular");
    for (auto& ei : e) {
      ei = std::max(ei / top, 0.0);
      if (ei > lo && ei < hi) {
        ei = 0.0;
        ++out.zeroed;
      }
    }
  }

  sort_pairs_desc(e, v);
  out.gram = DenseMatrix(d, d);
  kernels::dense_vdvt(d, v.data.data(), e.data(), out.gram.data.data());
  out.dec.eigenvalues = std::move(e);
  out.dec.v = std::move(v);
  out.handle = make_dense_gram_operator(out.gram, true);
  return out;
}

DenseVector exact_pcp(const ExactDecomposition& dec, double lambda, const DenseVector& chi) {
  const std::size_t d = dec.eigenvalues.size();
  check_same_dim(d, chi.size(), "exact_pcp");
  DenseVector out(d, 0.0);
  for (std::size_t j = 0; j < d && dec.eigenvalues[j] >= lambda; ++j) {
    double coef = 0.0;
    for (std::size_t i = 0; i < d; ++i) coef += dec.v.at(i, j) * chi[i];
    for (std::size_t i = 0; i < d; ++i) out[i] += coef * dec.v.at(i, j);
  }
  return out;
}

double relative_error(const DenseVector& zeta, const DenseVector& exact) {
  check_same_dim(zeta.size(), exact.size(), "relative_error");
  const double ref = nrm2(exact);
  if (ref == 0.0) {
    throw ZeroReference("relative_error: exact projection is zero; use absolute error");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < zeta.size(); ++i) {
    const double diff = zeta[i] - exact[i];
    s += diff * diff;
  }
  return std::sqrt(s) / ref;
}

CheckReport check_approx_pcp(const ExactDecomposition& dec, double lambda, double gamma,
                             double eps, const DenseVector& chi, const DenseVector& zeta) {
  const std::size_t d = dec.eigenvalues.size();
  check_same_dim(d, chi.size(), "check_approx_pcp");
  check_same_dim(d, zeta.size(), "check_approx_pcp");
  const double lo = (1.0 - gamma) * lambda;
  const double hi = (1.0 + gamma) * lambda;
  const double budget = eps * nrm2(chi);

  CheckReport rep;
  DenseVector diff(d);
  for (std::size_t i = 0; i < d; ++i) diff[i] = zeta[i] - chi[i];

  const DenseVector proj_hi = exact_pcp(dec, hi, diff);
  rep.slack1 = budget - nrm2(proj_hi);
  rep.cond1 = rep.slack1 >= 0.0;

  const DenseVector proj_lo = exact_pcp(dec, lo, zeta);
  double tail = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double r = zeta[i] - proj_lo[i];
    tail += r * r;
  }
  rep.slack2 = budget - std::sqrt(tail);
  rep.cond2 = rep.slack2 >= 0.0;

  rep.slack3 = std::numeric_limits<double>::infinity();
  rep.cond3 = true;
  for (std::size_t j = 0; j < d; ++j) {
    const double ev = dec.eigenvalues[j];
    if (ev < lo || ev > hi) continue;
    double vdiff = 0.0, vchi = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      vdiff += dec.v.at(i, j) * diff[i];
      vchi += dec.v.at(i, j) * chi[i];
    }
    const double slack = std::abs(vchi) + budget - std::abs(vdiff);
    if (slack < rep.slack3) rep.slack3 = slack;
  }
  rep.cond3 = !(rep.slack3 < 0.0);
  return rep;
}

void write_eigenvalues_csv(const std::string& path, const ExactDecomposition& dec) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw InvalidArgument("write_eigenvalues_csv: cannot open " + path);
  std::fprintf(f, "# eigenvalues of G, descending\n");
  std::fprintf(f, "index,eigenvalue\n");
  for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
    std::fprintf(f, "%zu,%.17g\n", i, dec.eigenvalues[i]);
  }
  std::fclose(f);
}

}  // namespace pcp
