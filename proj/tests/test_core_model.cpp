#include <cfloat>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "pcp/dense_matrix.hpp"
#include "pcp/errors.hpp"
#include "pcp/kernels.hpp"
#include "pcp/matrix_market.hpp"
#include "pcp/operator_handle.hpp"
#include "pcp/testbed.hpp"
#include "pcp/vec.hpp"

using namespace pcp;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  DenseMatrix m(r, c);
  for (double& x : m.data) x = rng.normal();
  return m;
}

// Dense PSD test matrix B^T B scaled into [0, 1]-ish range.
DenseMatrix random_psd(std::size_t d, Rng& rng) {
  DenseMatrix b = random_matrix(d + 3, d, rng);
  DenseMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < b.rows; ++k) s += b.at(k, i) * b.at(k, j);
      g.at(i, j) = s / static_cast<double>(b.rows);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("vector utilities") {
  DenseVector a{1.0, 2.0, 3.0}, b{4.0, -1.0, 0.5};
  CHECK(dot(a, b) == doctest::Approx(1.0 * 4.0 - 2.0 + 1.5).epsilon(1e-15));
  CHECK(nrm2(a) == doctest::Approx(std::sqrt(14.0)).epsilon(1e-15));

  DenseVector y = b;
  axpy(2.0, a, y);
  CHECK(y[0] == 6.0);
  CHECK(y[1] == 3.0);
  CHECK(y[2] == 6.5);

  scale(y, 0.5);
  CHECK(y[0] == 3.0);

  CHECK_NOTHROW(check_finite(a, "a"));
  DenseVector bad{1.0, std::nan(""), 0.0};
  CHECK_THROWS_AS(check_finite(bad, "bad"), InvalidArgument);
  bad[1] = INFINITY;
  CHECK_THROWS_AS(check_finite(bad, "bad"), InvalidArgument);
  CHECK_THROWS_AS(check_same_dim(2, 3, "dims"), DimensionMismatch);
}

TEST_CASE("parallel kernels match the serial reference bitwise") {
  Rng rng(42);
  const std::size_t m = 17, n = 11;
  DenseMatrix a = random_matrix(m, n, rng);
  DenseVector x(n), xt(m);
  for (double& v : x) v = rng.normal();
  for (double& v : xt) v = rng.normal();

  DenseVector y1(m), y2(m);
  kernels::dense_gemv(m, n, a.data.data(), x.data(), y1.data());
  kernels::dense_gemv_serial(m, n, a.data.data(), x.data(), y2.data());
  CHECK(y1 == y2);

  DenseVector z1(n), z2(n);
  kernels::dense_gemv_t(m, n, a.data.data(), xt.data(), z1.data());
  kernels::dense_gemv_t_serial(m, n, a.data.data(), xt.data(), z2.data());
  CHECK(z1 == z2);

  const std::size_t d = 9;
  DenseMatrix v = random_matrix(d, d, rng);
  DenseVector e(d);
  for (double& w : e) w = rng.uniform();
  DenseVector c1(d * d), c2(d * d);
  kernels::dense_vdvt(d, v.data.data(), e.data(), c1.data());
  kernels::dense_vdvt_serial(d, v.data.data(), e.data(), c2.data());
  CHECK(c1 == c2);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(c1[i * d + j] == c1[j * d + i]);  // bitwise symmetric by contract
    }
  }
}

TEST_CASE("operator handles count matvecs") {
  OperatorHandle h = make_diagonal_operator({1.0, 2.0}, false);
  CHECK(h.matvec_count() == 0);
  DenseVector out;
  h.apply({1.0, 1.0}, out);
  CHECK(h.matvec_count() == 1);
  CHECK(out[0] == 1.0);
  CHECK(out[1] == 2.0);

  OperatorHandle copy = h;  // copies share the counter
  copy.apply({0.0, 1.0});
  CHECK(h.matvec_count() == 2);
  h.reset_matvec_count();
  CHECK(copy.matvec_count() == 0);

  CHECK_THROWS_AS(h.apply({1.0, 2.0, 3.0}), DimensionMismatch);
  CHECK_THROWS_AS(OperatorHandle(0, [](const double*, double*) {}, false), InvalidArgument);
}

TEST_CASE("gram-from-A operator equals the dense product A^T A") {
  Rng rng(7);
  DenseMatrix a = random_matrix(6, 4, rng);
  OperatorHandle g = make_gram_from_a(a, false);
  CHECK(g.dim() == 4);

  DenseMatrix ata(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 6; ++k) s += a.at(k, i) * a.at(k, j);
      ata.at(i, j) = s;
    }
  }
  OperatorHandle gd = make_dense_gram_operator(ata, false);

  for (int probe = 0; probe < 5; ++probe) {
    DenseVector x(4);
    for (double& v : x) v = rng.normal();
    DenseVector y1 = g.apply(x), y2 = gd.apply(x);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
    }
  }
  CHECK(g.matvec_count() == 5);  // one count per G-application, not per gemv
}

TEST_CASE("operator linearity and symmetry probes") {
  Rng rng(11);
  const std::size_t d = 8;
  OperatorHandle g = make_dense_gram_operator(random_psd(d, rng), false);

  for (int probe = 0; probe < 20; ++probe) {
    DenseVector u(d), v(d);
    for (double& x : u) x = rng.normal();
    for (double& x : v) x = rng.normal();
    const double au = rng.uniform(-2.0, 2.0), bv = rng.uniform(-2.0, 2.0);

    DenseVector lin(d);
    for (std::size_t i = 0; i < d; ++i) lin[i] = au * u[i] + bv * v[i];
    DenseVector glin = g.apply(lin), gu = g.apply(u), gv = g.apply(v);

    const double scale = nrm2(glin) + std::abs(au) * nrm2(gu) + std::abs(bv) * nrm2(gv) + 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      CHECK(std::abs(glin[i] - (au * gu[i] + bv * gv[i])) <= 8 * DBL_EPSILON * scale * d);
    }
    CHECK(std::abs(dot(u, gv) - dot(gu, v)) <= 1e-10 * (nrm2(u) * nrm2(v) + 1.0));
  }
}

TEST_CASE("certified handles keep Rayleigh quotients in [0, 1]") {
  SyntheticSpec spec;
  spec.dim = 20;
  spec.lambda = 0.3;
  spec.gamma = 0.1;
  spec.seed = 5;
  GeneratedMatrix gm = gen_matrix(spec);
  REQUIRE(gm.handle.norm_certified());

  Rng rng(99);
  for (int probe = 0; probe < 20; ++probe) {
    DenseVector v = random_unit_vector(20, rng);
    const double rho = dot(v, gm.handle.apply(v));
    CHECK(rho >= -1e-12);
    CHECK(rho <= 1.0 + 1e-10);
  }
}

TEST_CASE("power_normalize: identity operator") {
  OperatorHandle g = make_diagonal_operator({1.0, 1.0, 1.0}, false);
  PowerNormalizeResult res = power_normalize(g, 1e-8);
  CHECK(res.sigma1_sq == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.handle.norm_certified());
  DenseVector out = res.handle.apply({1.0, -2.0, 3.0});
  CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("power_normalize: diagonal scaling") {
  OperatorHandle g = make_diagonal_operator({4.0, 1.0}, false);
  PowerNormalizeResult res = power_normalize(g, 1e-8);
  CHECK(std::abs(res.sigma1_sq - 4.0) <= 4.0 * 1e-6);
  DenseVector e1 = res.handle.apply({1.0, 0.0});
  DenseVector e2 = res.handle.apply({0.0, 1.0});
  CHECK(e1[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(e2[1] == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("power_normalize: rotated spectrum against the eigensolver oracle") {
  Rng rng(3);
  const std::size_t d = 3;
  DenseMatrix q = random_orthogonal(d, rng);
  DenseVector e{2.0, 1.0, 0.5};
  DenseMatrix g(d, d);
  kernels::dense_vdvt(d, q.data.data(), e.data(), g.data.data());

  // Independent top-eigenvalue oracle for the same matrix.
  DenseVector ev;
  DenseMatrix v;
  jacobi_eigh(g, ev, v);
  CHECK(ev[0] == doctest::Approx(2.0).epsilon(1e-12));

  PowerNormalizeResult res = power_normalize(make_dense_gram_operator(g, false), 1e-8);
  CHECK(std::abs(res.sigma1_sq - ev[0]) <= 1e-8 * 4.0);
}

TEST_CASE("power_normalize is idempotent on certified handles") {
  OperatorHandle g = make_diagonal_operator({0.7, 0.2, 1.0, 0.05}, false);
  PowerNormalizeResult once = power_normalize(g, 1e-8);
  PowerNormalizeResult twice = power_normalize(once.handle, 1e-8);
  CHECK(std::abs(twice.sigma1_sq - 1.0) < 1e-8);
}

TEST_CASE("power_normalize error paths") {
  CHECK_THROWS_AS(power_normalize(make_diagonal_operator({0.0, 0.0}, false), 1e-8),
                  ZeroOperator);
  CHECK_THROWS_AS(power_normalize(make_diagonal_operator({1.0}, false), 0.0), InvalidArgument);
  CHECK_THROWS_AS(power_normalize(make_diagonal_operator({1.0}, false), 0.1), InvalidArgument);

  // Slow-mixing case: eigenvalue ratio 0.75 with the probe mostly on the
  // smaller eigenvector keeps successive Rayleigh quotients moving by more
  // than tol for all 10*d iterations. The probe is deterministic per d, so
  // record it with a spy identity operator first.
  DenseVector probe;
  OperatorHandle spy(
      2,
      [&probe](const double* in, double* out) {
        probe.assign(in, in + 2);
        out[0] = in[0];
        out[1] = in[1];
      },
      false);
  (void)power_normalize(spy, 1e-3);
  REQUIRE(probe.size() == 2);
  double pn = nrm2(probe);
  scale(probe, 1.0 / pn);

  DenseVector u{-probe[1], probe[0]};  // unit, orthogonal to the probe
  // Top eigenvector nearly orthogonal to the probe: weight ratio 10:1.
  const double s = 1.0 / std::sqrt(101.0);
  DenseVector v1{(probe[0] + 10.0 * u[0]) * s, (probe[1] + 10.0 * u[1]) * s};
  DenseVector v2{(10.0 * probe[0] - u[0]) * s, (10.0 * probe[1] - u[1]) * s};
  DenseMatrix g(2, 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      g.at(i, j) = v1[i] * v1[j] + 0.75 * v2[i] * v2[j];
    }
  }
  CHECK_THROWS_AS(power_normalize(make_dense_gram_operator(g, false), 1e-4), NonConvergent);
}

TEST_CASE("matrix market round-trips") {
  Rng rng(17);
  DenseMatrix m = random_matrix(3, 4, rng);
  write_matrix_market_array("mm_rt_array.tmp.mtx", m);
  DenseMatrix back = read_matrix_market("mm_rt_array.tmp.mtx");
  REQUIRE(back.rows == 3);
  REQUIRE(back.cols == 4);
  CHECK(back.data == m.data);  // 17-digit output round-trips exactly

  DenseMatrix sp(3, 3);
  sp.at(0, 0) = 1.5;
  sp.at(2, 1) = -2.25;
  write_matrix_market_coordinate("mm_rt_coord.tmp.mtx", sp);
  DenseMatrix spb = read_matrix_market("mm_rt_coord.tmp.mtx");
  REQUIRE(spb.rows == 3);
  CHECK(spb.data == sp.data);

  DenseVector v{1.0, -0.5, 1e-17, 3.25};
  write_vector_market("mm_rt_vec.tmp.mtx", v);
  CHECK(read_vector_market("mm_rt_vec.tmp.mtx") == v);

  std::ofstream bad("mm_rt_bad.tmp.mtx");
  bad << "not a matrix market file\n1 2 3\n";
  bad.close();
  CHECK_THROWS_AS(read_matrix_market("mm_rt_bad.tmp.mtx"), ParseError);
  CHECK_THROWS_AS(read_matrix_market("mm_rt_missing.tmp.mtx"), ParseError);
}
