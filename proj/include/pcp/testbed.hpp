#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "pcp/dense_matrix.hpp"
#include "pcp/operator_handle.hpp"
#include "pcp/vec.hpp"

namespace pcp {

// xoshiro256++ with splitmix64 seeding. Self-contained so generated matrices
// are bitwise reproducible across platforms and standard-library versions
// (std::mt19937 streams are portable, but the distributions are not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next_u64();
  double uniform();                    // [0, 1), 53-bit resolution
  double uniform(double a, double b);  // [a, b)
  double normal();                     // Box-Muller, cosine branch only

 private:
  std::uint64_t s_[4];
};

enum class EigenDist { RandomEigen, UniformEigen };

struct SyntheticSpec {
  std::size_t dim = 0;
  double lambda = 0.0;
  double gamma = 0.0;
  EigenDist dist = EigenDist::UniformEigen;
  std::uint64_t seed = 0;
};

// Eigenvalues descending; column j of v is the unit eigenvector for
// eigenvalues[j]. This is the only place the library eigendecomposes.
struct ExactDecomposition {
  DenseVector eigenvalues;
  DenseMatrix v;
};

struct GeneratedMatrix {
  OperatorHandle handle;  // norm-certified dense G with top eigenvalue exactly 1
  ExactDecomposition dec;
  DenseMatrix gram;
  std::size_t zeroed = 0;  // RandomEigen only: eigenvalues dropped from the band
};

// Synthetic G = A^T A with no eigenvalue inside ((1-gamma)lambda, (1+gamma)lambda).
// UniformEigen: ceil(d/2) singular values uniform on [0, sqrt((1-gamma)lambda)),
// d - ceil(d/2) - 1 uniform on [sqrt((1+gamma)lambda), 1), one pinned at 1,
// eigenvectors from a Haar orthogonal matrix. RandomEigen: Gaussian B,
// eigendecompose B^T B, divide by the top eigenvalue, zero the in-band values.
GeneratedMatrix gen_matrix(const SyntheticSpec& spec);

// Sum of v_j <v_j, chi> over eigenvalues >= lambda.
DenseVector exact_pcp(const ExactDecomposition& dec, double lambda, const DenseVector& chi);

// ||zeta - exact|| / ||exact||; throws ZeroReference when ||exact|| = 0.
double relative_error(const DenseVector& zeta, const DenseVector& exact);

// The three approximate-projection conditions, evaluated with exact
// projectors at (1 +- gamma) lambda. Slacks are rhs - lhs (>= 0 iff pass);
// slack3 is +inf when no eigenvalue lies in the closed band.
struct CheckReport {
  bool cond1 = false;
  bool cond2 = false;
  bool cond3 = false;
  double slack1 = 0.0;
  double slack2 = 0.0;
  double slack3 = 0.0;
  bool pass() const { return cond1 && cond2 && cond3; }
};
CheckReport check_approx_pcp(const ExactDecomposition& dec, double lambda, double gamma,
                             double eps, const DenseVector& chi, const DenseVector& zeta);

// Cyclic Jacobi for symmetric matrices; stops when the off-diagonal Frobenius
// mass falls below 1e-14 * ||g||_F, throws NonConvergent past max_sweeps.
// Output pairs are sorted by descending eigenvalue.
void jacobi_eigh(const DenseMatrix& g, DenseVector& eigenvalues, DenseMatrix& v,
                 int max_sweeps = 40);

// Haar orthogonal matrix: Householder QR of a Gaussian matrix with the R
// diagonal forced positive.
DenseMatrix random_orthogonal(std::size_t d, Rng& rng);

// Standard Gaussian direction, normalized to unit length.
DenseVector random_unit_vector(std::size_t d, Rng& rng);

// index,eigenvalue rows (descending), 17 significant digits, '#' comments.
void write_eigenvalues_csv(const std::string& path, const ExactDecomposition& dec);

}  // namespace pcp
