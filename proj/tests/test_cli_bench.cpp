#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pcp/engine.hpp"
#include "pcp/errors.hpp"
#include "pcp/matrix_market.hpp"
#include "pcp/sweeps.hpp"
#include "pcp/testbed.hpp"

using namespace pcp;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Run the CLI binary with the given arguments, capturing stdout.
RunResult run_cli(const std::string& args) {
  const std::string out_path = "cli_stdout.tmp.txt";
  const std::string cmd = std::string(PCP_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string l;
  while (std::getline(in, l)) lines.push_back(l);
  return lines;
}

// Strip the trailing wall-seconds column of a cost-bench data row.
std::string drop_last_column(const std::string& line) {
  const std::size_t pos = line.rfind(',');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

SweepConfig tiny_config() {
  SweepConfig cfg;
  cfg.lambdas = {0.3};
  cfg.gamma = 0.1;
  cfg.dim = 16;
  cfg.seeds = 2;
  cfg.n_min = 1;
  cfg.n_max = 21;
  cfg.stride = 10;
  return cfg;
}

}  // namespace

TEST_CASE("run_pipeline maps methods onto the engines") {
  SyntheticSpec spec;
  spec.dim = 16;
  spec.lambda = 0.3;
  spec.gamma = 0.1;
  spec.seed = 2;
  GeneratedMatrix gm = gen_matrix(spec);
  Rng rng(22);
  DenseVector chi = random_unit_vector(16, rng);

  ProjectionReport q = run_pipeline(FilterKind::Ridge, gm.handle, chi, 0.3, 0.1, 8, 1e-13);
  CHECK(q.ridge_solves == 17);
  ProjectionReport p1 = run_pipeline(FilterKind::Poly1, gm.handle, chi, 0.3, 0.1, 8, 1e-13);
  CHECK(p1.matvecs == 17);
  ProjectionReport p2 = run_pipeline(FilterKind::Poly2, gm.handle, chi, 0.3, 0.1, 8, 1e-13);
  CHECK(p2.matvecs == 34);
}

TEST_CASE("degree sweep emits one row per (lambda, method, degree)") {
  SweepConfig cfg = tiny_config();
  std::vector<DegreeSweepRow> rows = run_degree_sweep(cfg);
  REQUIRE(rows.size() == 9);  // 1 lambda x 3 methods x degrees {1, 11, 21}

  // Fixed assembly order: methods quick, poly1, poly2; degrees ascending.
  CHECK(rows[0].method == "quick");
  CHECK(rows[3].method == "poly1");
  CHECK(rows[6].method == "poly2");
  for (int m = 0; m < 3; ++m) {
    CHECK(rows[3 * m + 0].degree == 1);
    CHECK(rows[3 * m + 1].degree == 11);
    CHECK(rows[3 * m + 2].degree == 21);
  }
  for (const auto& r : rows) {
    CHECK(r.lambda == 0.3);
    CHECK(r.mean_error > 0.0);
    CHECK(std::isfinite(r.mean_error));
  }
  // Exact per-degree budgets survive averaging over seeds.
  CHECK(rows[4].mean_matvecs == 23.0);   // poly1 at n=11
  CHECK(rows[7].mean_matvecs == 46.0);   // poly2 at n=11
  CHECK(rows[1].mean_cg_iterations > 0.0);

  // Error decreases with degree for the polynomial methods.
  CHECK(rows[5].mean_error < rows[3].mean_error);
  CHECK(rows[8].mean_error < rows[6].mean_error);

  std::vector<DegreeSweepRow> again = run_degree_sweep(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].mean_error == again[i].mean_error);  // bitwise deterministic
    CHECK(rows[i].mean_matvecs == again[i].mean_matvecs);
  }

  SweepConfig bad = cfg;
  bad.lambdas.clear();
  CHECK_THROWS_AS(run_degree_sweep(bad), InvalidArgument);
  bad = cfg;
  bad.n_min = 0;
  CHECK_THROWS_AS(run_degree_sweep(bad), InvalidArgument);
}

TEST_CASE("cost bench finds the minimal degree meeting the target") {
  SweepConfig cfg = tiny_config();
  cfg.n_min = 1;
  cfg.n_max = 150;
  const double target = 1e-2;
  std::vector<CostBenchRow> rows = run_cost_bench(cfg, target);
  REQUIRE(rows.size() == 3);

  for (const auto& r : rows) {
    REQUIRE(r.reached);
    CHECK(r.degree >= 1);
    CHECK(r.mean_error <= target);
    CHECK(r.wall_seconds >= 0.0);

    // Minimality: one degree lower misses the target (recompute by hand).
    if (r.degree > cfg.n_min) {
      FilterKind kind = FilterKind::Ridge;
      if (r.method == "poly1") kind = FilterKind::Poly1;
      if (r.method == "poly2") kind = FilterKind::Poly2;
      double mean_prev = 0.0;
      for (std::uint64_t seed = 1; seed <= cfg.seeds; ++seed) {
        GeneratedMatrix gm = gen_matrix({cfg.dim, 0.3, cfg.gamma, cfg.dist, seed});
        Rng chi_rng(seed ^ kChiStreamSalt);
        DenseVector chi = random_unit_vector(cfg.dim, chi_rng);
        ProjectionReport rep =
            run_pipeline(kind, gm.handle, chi, 0.3, cfg.gamma, r.degree - 1, 1e-13);
        mean_prev += relative_error(rep.zeta, exact_pcp(gm.dec, 0.3, chi));
      }
      mean_prev /= static_cast<double>(cfg.seeds);
      CHECK(mean_prev > target);
    }
  }

  // poly2's larger gap means a smaller minimal degree than poly1 at 0.3.
  CHECK(rows[2].degree <= rows[1].degree);

  // Unreachable target flags the row instead of throwing.
  SweepConfig capped = tiny_config();
  capped.n_max = 3;
  std::vector<CostBenchRow> flagged = run_cost_bench(capped, 1e-30);
  for (const auto& r : flagged) {
    CHECK_FALSE(r.reached);
    CHECK(r.degree == 0);
  }
}

TEST_CASE("sweep csv writers emit the documented schema") {
  SweepConfig cfg = tiny_config();
  std::vector<DegreeSweepRow> rows = run_degree_sweep(cfg);
  write_degree_sweep_csv("sweep_schema.tmp.csv", cfg, rows);
  std::vector<std::string> lines = read_lines("sweep_schema.tmp.csv");
  REQUIRE(lines.size() == 3 + rows.size());
  CHECK(lines[0] == "# error-vs-degree sweep: mean over seeds of the relative error");
  CHECK(lines[1] == "# gamma=0.1 dim=16 dist=uniform seeds=2 degree-range=1:21:10");
  CHECK(lines[2] == "lambda,method,degree,mean_error,mean_matvecs,mean_cg_iterations");
  CHECK(contains(lines[3], "0.3,quick,1,"));

  std::vector<CostBenchRow> crows = run_cost_bench(cfg, 1e-1);
  write_cost_bench_csv("bench_schema.tmp.csv", cfg, 1e-1, crows);
  std::vector<std::string> clines = read_lines("bench_schema.tmp.csv");
  REQUIRE(clines.size() == 4 + crows.size());
  CHECK(clines[0] == "# cost-vs-lambda bench: smallest degree with mean error <= target");
  CHECK(clines[1] == "# target=0.1 (wall_seconds is informational; exclude it when comparing)");
  CHECK(clines[3] ==
        "lambda,method,degree,reached,mean_error,mean_matvecs,mean_cg_iterations,wall_seconds");

  // Byte-identical reruns once the wall column is stripped.
  write_cost_bench_csv("bench_schema2.tmp.csv", cfg, 1e-1, run_cost_bench(cfg, 1e-1));
  std::vector<std::string> clines2 = read_lines("bench_schema2.tmp.csv");
  REQUIRE(clines2.size() == clines.size());
  for (std::size_t i = 0; i < clines.size(); ++i) {
    CHECK(drop_last_column(clines[i]) == drop_last_column(clines2[i]));
  }
}

TEST_CASE("cli: select prints the score table") {
  RunResult r = run_cli("select --lambda 0.2 --gamma 0.1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "chosen=poly2"));
  CHECK(contains(r.out, "b1="));
  CHECK(contains(r.out, "alpha_2="));

  r = run_cli("select --lambda 0.05 --gamma 0.1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "chosen=ridge"));

  r = run_cli("select --lambda 0.45 --gamma 0.1");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "chosen=poly1"));

  r = run_cli("select --lambda 2 --gamma 0.1");
  CHECK(r.exit_code == 2);

  r = run_cli("select --lambda 0.2");  // missing required flag
  CHECK(r.exit_code == 2);

  r = run_cli("definitely-not-a-subcommand");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: project on an identity matrix keeps the vector") {
  DenseMatrix eye(3, 3);
  for (std::size_t i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
  write_matrix_market_array("cli_eye.tmp.mtx", eye);
  std::ofstream chi("cli_chi.tmp.txt");
  chi << "1\n2\n3\n";
  chi.close();

  RunResult r = run_cli(
      "project --matrix cli_eye.tmp.mtx --chi cli_chi.tmp.txt --lambda 0.5 "
      "--out cli_zeta.tmp.mtx");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "filter=poly1"));
  CHECK(contains(r.out, "sigma1_sq=1"));
  DenseVector zeta = read_vector_market("cli_zeta.tmp.mtx");
  REQUIRE(zeta.size() == 3);
  CHECK(std::abs(zeta[0] - 1.0) <= 1e-6);
  CHECK(std::abs(zeta[1] - 2.0) <= 1e-6);
  CHECK(std::abs(zeta[2] - 3.0) <= 1e-6);

  // csv output format: one number per line.
  r = run_cli(
      "project --matrix cli_eye.tmp.mtx --chi cli_chi.tmp.txt --lambda 0.5 "
      "--out cli_zeta.tmp.csv --format csv");
  CHECK(r.exit_code == 0);
  std::vector<std::string> lines = read_lines("cli_zeta.tmp.csv");
  REQUIRE(lines.size() == 3);
  CHECK(std::abs(std::stod(lines[0]) - 1.0) <= 1e-6);
}

TEST_CASE("cli: project handles the zero operator gracefully") {
  DenseMatrix zero(2, 2);
  write_matrix_market_array("cli_zero.tmp.mtx", zero);
  std::ofstream chi("cli_chi2.tmp.txt");
  chi << "5, -7\n";
  chi.close();

  RunResult r = run_cli(
      "project --matrix cli_zero.tmp.mtx --chi cli_chi2.tmp.txt --lambda 0.3 "
      "--out cli_zeta0.tmp.mtx");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "filter=none"));
  CHECK(contains(r.out, "zeta_norm=0"));
  DenseVector zeta = read_vector_market("cli_zeta0.tmp.mtx");
  CHECK(zeta[0] == 0.0);
  CHECK(zeta[1] == 0.0);
}

TEST_CASE("cli: project error paths use the documented exit codes") {
  RunResult r = run_cli(
      "project --matrix cli_missing.tmp.mtx --chi cli_chi.tmp.txt --lambda 0.3");
  CHECK(r.exit_code == 2);

  // Valid files, invalid threshold: parameter error -> 2.
  r = run_cli("project --matrix cli_eye.tmp.mtx --chi cli_chi.tmp.txt --lambda 0.99");
  CHECK(r.exit_code == 2);
}

TEST_CASE("cli: gen-matrix writes the matrix and its eigenvalue sidecar") {
  RunResult r = run_cli(
      "gen-matrix --dim 12 --lambda 0.3 --gamma 0.2 --dist uniform --seeds 9 "
      "--out cli_gen.tmp.mtx");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "dim=12"));
  CHECK(contains(r.out, "top_eigenvalue=1"));

  DenseMatrix g = read_matrix_market("cli_gen.tmp.mtx");
  REQUIRE(g.rows == 12);
  REQUIRE(g.cols == 12);

  // The sidecar carries the exact spectrum the generator reports.
  std::vector<std::string> eigs = read_lines("cli_gen.tmp.mtx.eigs.csv");
  REQUIRE(eigs.size() == 2 + 12);

  // Bitwise match with an in-process generation at the same seed.
  GeneratedMatrix gm = gen_matrix({12, 0.3, 0.2, EigenDist::UniformEigen, 9});
  CHECK(g.data == gm.gram.data);
}

TEST_CASE("cli: end-to-end projection against the oracle") {
  GeneratedMatrix gm = gen_matrix({200, 0.3, 0.1, EigenDist::UniformEigen, 1});
  write_matrix_market_array("cli_e2e_g.tmp.mtx", gm.gram);
  Rng rng(1 ^ kChiStreamSalt);
  DenseVector chi = random_unit_vector(200, rng);
  write_vector_market("cli_e2e_chi.tmp.mtx", chi);

  RunResult r = run_cli(
      "project --matrix cli_e2e_g.tmp.mtx --chi cli_e2e_chi.tmp.mtx --lambda 0.3 "
      "--gamma 0.1 --eps 1e-6 --out cli_e2e_zeta.tmp.mtx");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "filter=poly1"));

  DenseVector zeta = read_vector_market("cli_e2e_zeta.tmp.mtx");
  DenseVector exact = exact_pcp(gm.dec, 0.3, chi);
  CHECK(relative_error(zeta, exact) <= 1e-6);
}

TEST_CASE("cli: sweep-degree and bench-cost write csv artifacts") {
  RunResult r = run_cli(
      "sweep-degree --lambda 0.3 --gamma 0.1 --dim 12 --seeds 2 "
      "--degree-range 1:11:5 --out cli_sweep.tmp.csv");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "rows=9"));
  std::vector<std::string> lines = read_lines("cli_sweep.tmp.csv");
  REQUIRE(lines.size() == 3 + 9);
  CHECK(lines[2] == "lambda,method,degree,mean_error,mean_matvecs,mean_cg_iterations");

  r = run_cli(
      "bench-cost --lambda 0.3 --gamma 0.1 --dim 12 --seeds 1 --eps 1e-2 "
      "--degree-range 1:120 --out cli_bench.tmp.csv");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "rows=3"));
  std::vector<std::string> blines = read_lines("cli_bench.tmp.csv");
  REQUIRE(blines.size() == 4 + 3);
  for (std::size_t i = 4; i < blines.size(); ++i) {
    CHECK(contains(blines[i], ",1,"));  // reached flag set on every row
  }

  r = run_cli("sweep-degree --lambda 0.3 --degree-range nonsense --out x.tmp.csv");
  CHECK(r.exit_code == 2);
}
