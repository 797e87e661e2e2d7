#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcp/admissible.hpp"
#include "pcp/engine.hpp"
#include "pcp/testbed.hpp"

namespace pcp {

// Parameters for the degree-error and cost sweeps. Seed values are 1..seeds;
// the test vector stream for seed s is Rng(s ^ kChiStreamSalt) so matrices
// and vectors never share a stream.
struct SweepConfig {
  std::vector<double> lambdas;
  double gamma = 0.1;
  std::size_t n_min = 1;
  std::size_t n_max = 200;
  std::size_t stride = 5;
  std::size_t seeds = 10;
  std::size_t dim = 300;
  EigenDist dist = EigenDist::UniformEigen;
  std::string out_path;
};

inline constexpr std::uint64_t kChiStreamSalt = 0x243f6a8885a308d3ULL;

struct DegreeSweepRow {
  double lambda = 0.0;
  std::string method;  // quick | poly1 | poly2
  std::size_t degree = 0;
  double mean_error = 0.0;
  double mean_matvecs = 0.0;
  double mean_cg_iterations = 0.0;
};

struct CostBenchRow {
  double lambda = 0.0;
  std::string method;
  std::size_t degree = 0;  // smallest degree reaching the target (0 if none)
  bool reached = false;
  double mean_error = 0.0;
  double mean_matvecs = 0.0;
  double mean_cg_iterations = 0.0;
  double wall_seconds = 0.0;  // informational only, never asserted
};

// One projection with the given method; Ridge dispatches to quick_pcp with
// the supplied solver tolerance, polynomials to poly_pcp via make_filter.
ProjectionReport run_pipeline(FilterKind kind, const OperatorHandle& g, const DenseVector& chi,
                              double lambda, double gamma, std::size_t n, double eps_prime);

// One row per (lambda, method, degree): error/cost means over the seeds.
// Cells run concurrently; assembly order is fixed, so output is deterministic.
std::vector<DegreeSweepRow> run_degree_sweep(const SweepConfig& cfg);

// Per (lambda, method): smallest degree in [n_min, n_max] whose mean error
// meets the target (doubling then bisection), with the costs at that degree.
std::vector<CostBenchRow> run_cost_bench(const SweepConfig& cfg, double target);

void write_degree_sweep_csv(const std::string& path, const SweepConfig& cfg,
                            const std::vector<DegreeSweepRow>& rows);
void write_cost_bench_csv(const std::string& path, const SweepConfig& cfg, double target,
                          const std::vector<CostBenchRow>& rows);

}  // namespace pcp
