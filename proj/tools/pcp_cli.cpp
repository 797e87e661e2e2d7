// Command-line surface: one-shot projections, filter selection tables,
// synthetic matrix generation, and the error/cost sweep drivers.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcp/admissible.hpp"
#include "pcp/engine.hpp"
#include "pcp/errors.hpp"
#include "pcp/kernels.hpp"
#include "pcp/matrix_market.hpp"
#include "pcp/operator_handle.hpp"
#include "pcp/sweeps.hpp"
#include "pcp/testbed.hpp"

namespace {

struct ProjectArgs {
  std::string matrix, chi, out;
  std::string format = "mm";
  double lambda = 0.0;
  double gamma = 0.1;
  double eps = 1e-6;
};

struct SelectArgs {
  double lambda = 0.0;
  double gamma = 0.0;
};

struct GenArgs {
  std::size_t dim = 0;
  double lambda = 0.0;
  double gamma = 0.0;
  std::string dist = "uniform";
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "mm";
};

struct SweepArgs {
  std::vector<double> lambdas;
  double gamma = 0.1;
  std::size_t dim = 300;
  std::string dist = "uniform";
  std::size_t seeds = 10;
  std::string degree_range = "1:200:5";
  double eps = 1e-10;  // bench-cost target
  std::string out;
};

pcp::EigenDist parse_dist(const std::string& s) {
  return s == "random" ? pcp::EigenDist::RandomEigen : pcp::EigenDist::UniformEigen;
}

void parse_degree_range(const std::string& s, pcp::SweepConfig& cfg) {
  std::size_t a = 0, b = 0, c = 1;
  const int got = std::sscanf(s.c_str(), "%zu:%zu:%zu", &a, &b, &c);
  if (got < 2) {
    throw pcp::InvalidArgument("--degree-range expects n_min:n_max[:stride], got '" + s + "'");
  }
  cfg.n_min = a;
  cfg.n_max = b;
  cfg.stride = got >= 3 ? c : 1;
}

// Vector input: Matrix Market if the banner is present, otherwise plain
// whitespace/comma separated numbers.
pcp::DenseVector read_vector_any(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pcp::ParseError("cannot open vector file: " + path);
  std::string first;
  std::getline(in, first);
  if (first.rfind("%%MatrixMarket", 0) == 0) return pcp::read_vector_market(path);
  pcp::DenseVector v;
  in.seekg(0);
  std::string tok;
  while (in >> tok) {
    std::size_t start = 0;
    while (start < tok.size()) {
      std::size_t comma = tok.find(',', start);
      const std::string piece =
          tok.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) {
        try {
          v.push_back(std::stod(piece));
        } catch (const std::exception&) {
          throw pcp::ParseError("vector file " + path + ": bad number '" + piece + "'");
        }
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (v.empty()) throw pcp::ParseError("vector file " + path + " has no entries");
  return v;
}

void write_vector_out(const std::string& path, const std::string& format,
                      const pcp::DenseVector& v) {
  if (format == "mm") {
    pcp::write_vector_market(path, v);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw pcp::InvalidArgument("cannot open output file: " + path);
  for (double x : v) std::fprintf(f, "%.17g\n", x);
  std::fclose(f);
}

void write_matrix_csv(const std::string& path, const pcp::DenseMatrix& m) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw pcp::InvalidArgument("cannot open output file: " + path);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      std::fprintf(f, "%s%.17g", j == 0 ? "" : ",", m.at(i, j));
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

bool looks_symmetric(const pcp::DenseMatrix& m) {
  if (m.rows != m.cols) return false;
  double scale = 0.0;
  for (double x : m.data) scale = std::max(scale, std::abs(x));
  const double tol = 1e-12 * (scale > 0.0 ? scale : 1.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = i + 1; j < m.cols; ++j) {
      if (std::abs(m.at(i, j) - m.at(j, i)) > tol) return false;
    }
  }
  return true;
}

void print_report(const pcp::ProjectionReport& rep, double sigma1_sq,
                  const char* filter_name) {
  std::printf("filter=%s\n", filter_name);
  std::printf("degree=%zu\n", rep.degree);
  std::printf("matvecs=%llu\n", static_cast<unsigned long long>(rep.matvecs));
  std::printf("cg_iterations=%zu\n", rep.cg_iterations);
  std::printf("ridge_solves=%zu\n", rep.ridge_solves);
  std::printf("lambda=%.17g\n", rep.lambda);
  std::printf("gamma=%.17g\n", rep.gamma);
  std::printf("gamma_eff=%.17g\n", rep.gamma_eff);
  std::printf("alpha=%.17g\n", rep.alpha);
  std::printf("kappa=%.17g\n", rep.kappa);
  std::printf("eps_prime=%.17g\n", rep.eps_prime);
  std::printf("ridge_converged=%d\n", rep.ridge_converged ? 1 : 0);
  std::printf("sigma1_sq=%.17g\n", sigma1_sq);
  std::printf("zeta_norm=%.17g\n", pcp::nrm2(rep.zeta));
}

int cmd_project(const ProjectArgs& args) {
  const pcp::DenseMatrix m = pcp::read_matrix_market(args.matrix);
  const pcp::DenseVector chi = read_vector_any(args.chi);

  // Square symmetric input is taken as G = A^T A itself; anything else as A.
  pcp::OperatorHandle raw = looks_symmetric(m)
                                ? pcp::make_dense_gram_operator(m, false)
                                : pcp::make_gram_from_a(m, false);
  pcp::check_same_dim(raw.dim(), chi.size(), "project: matrix vs chi");

  pcp::PowerNormalizeResult pn;
  try {
    pn = pcp::power_normalize(raw, 1e-10);
  } catch (const pcp::ZeroOperator&) {
    // The zero operator has no components above any positive threshold.
    pcp::ProjectionReport rep;
    rep.zeta.assign(chi.size(), 0.0);
    rep.lambda = args.lambda;
    rep.gamma = args.gamma;
    if (!args.out.empty()) write_vector_out(args.out, args.format, rep.zeta);
    print_report(rep, 0.0, "none");
    return 0;
  }

  const pcp::ProjectionReport rep =
      pcp::project(pn.handle, chi, args.lambda, args.gamma, args.eps);
  if (!args.out.empty()) write_vector_out(args.out, args.format, rep.zeta);
  print_report(rep, pn.sigma1_sq, pcp::to_string(rep.filter_kind));
  return 0;
}

int cmd_select(const SelectArgs& args) {
  const pcp::Selection sel = pcp::select_filter(args.lambda, args.gamma);
  const pcp::GapReport& r = sel.report;
  std::printf("lambda=%.17g\n", args.lambda);
  std::printf("gamma=%.17g\n", args.gamma);
  std::printf("alpha_r=%.17g\n", r.alpha_r);
  std::printf("alpha_1=%.17g\n", r.alpha_1);
  std::printf("two_alpha_1=%.17g\n", 2.0 * r.alpha_1);
  std::printf("alpha_2=%.17g\n", r.alpha_2);
  std::printf("region=%d\n", r.region);
  std::printf("b1=%.17g\n", r.b1);
  std::printf("b2=%.17g\n", r.b2);
  std::printf("chosen=%s\n", pcp::to_string(r.chosen));
  return 0;
}

int cmd_gen_matrix(const GenArgs& args) {
  pcp::SyntheticSpec spec;
  spec.dim = args.dim;
  spec.lambda = args.lambda;
  spec.gamma = args.gamma;
  spec.dist = parse_dist(args.dist);
  spec.seed = args.seed;
  const pcp::GeneratedMatrix gm = pcp::gen_matrix(spec);

  if (args.format == "mm") {
    pcp::write_matrix_market_array(args.out, gm.gram);
  } else {
    write_matrix_csv(args.out, gm.gram);
  }
  pcp::write_eigenvalues_csv(args.out + ".eigs.csv", gm.dec);

  std::printf("dim=%zu\n", args.dim);
  std::printf("lambda=%.17g\n", args.lambda);
  std::printf("gamma=%.17g\n", args.gamma);
  std::printf("dist=%s\n", args.dist.c_str());
  std::printf("seed=%llu\n", static_cast<unsigned long long>(args.seed));
  std::printf("zeroed=%zu\n", gm.zeroed);
  std::printf("top_eigenvalue=%.17g\n", gm.dec.eigenvalues.front());
  std::printf("out=%s\n", args.out.c_str());
  return 0;
}

pcp::SweepConfig to_config(const SweepArgs& args) {
  pcp::SweepConfig cfg;
  cfg.lambdas = args.lambdas;
  cfg.gamma = args.gamma;
  cfg.dim = args.dim;
  cfg.dist = parse_dist(args.dist);
  cfg.seeds = args.seeds;
  cfg.out_path = args.out;
  parse_degree_range(args.degree_range, cfg);
  return cfg;
}

int cmd_sweep_degree(const SweepArgs& args) {
  const pcp::SweepConfig cfg = to_config(args);
  const auto rows = pcp::run_degree_sweep(cfg);
  pcp::write_degree_sweep_csv(cfg.out_path, cfg, rows);
  std::printf("rows=%zu\n", rows.size());
  std::printf("out=%s\n", cfg.out_path.c_str());
  return 0;
}

int cmd_bench_cost(const SweepArgs& args) {
  const pcp::SweepConfig cfg = to_config(args);
  const auto rows = pcp::run_cost_bench(cfg, args.eps);
  pcp::write_cost_bench_csv(cfg.out_path, cfg, args.eps, rows);
  std::printf("rows=%zu\n", rows.size());
  std::printf("out=%s\n", cfg.out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  pcp::kernels::apply_thread_cap();

  CLI::App app{"Matrix-free principal component projection of vectors"};
  app.require_subcommand(1);
  const auto fmt_check = CLI::IsMember({"mm", "csv"});
  const auto dist_check = CLI::IsMember({"random", "uniform"});

  ProjectArgs pa;
  CLI::App* project = app.add_subcommand(
      "project", "Approximate the principal component projection of a vector");
  project->add_option("--matrix", pa.matrix, "Matrix Market file: symmetric G, or A (Gram taken)")
      ->required();
  project->add_option("--chi", pa.chi, "input vector (Matrix Market or plain numbers)")
      ->required();
  project->add_option("--lambda", pa.lambda, "threshold on the normalized spectrum of G")
      ->required();
  project->add_option("--gamma", pa.gamma, "relative band half-width (default 0.1)");
  project->add_option("--eps", pa.eps, "approximation tolerance (default 1e-6)");
  project->add_option("--out", pa.out, "write the projection to this file");
  project->add_option("--format", pa.format, "output format: mm|csv")->check(fmt_check);

  SelectArgs sa;
  CLI::App* select = app.add_subcommand("select", "Print gap scores and the chosen filter");
  select->add_option("--lambda", sa.lambda)->required();
  select->add_option("--gamma", sa.gamma)->required();

  GenArgs ga;
  CLI::App* gen = app.add_subcommand("gen-matrix", "Generate a synthetic banded-spectrum G");
  gen->add_option("--dim", ga.dim)->required();
  gen->add_option("--lambda", ga.lambda)->required();
  gen->add_option("--gamma", ga.gamma)->required();
  gen->add_option("--dist", ga.dist, "random|uniform")->check(dist_check);
  gen->add_option("--seeds", ga.seed, "seed value (single matrix)");
  gen->add_option("--out", ga.out)->required();
  gen->add_option("--format", ga.format, "matrix output format: mm|csv")->check(fmt_check);

  SweepArgs swa;
  CLI::App* sweep = app.add_subcommand("sweep-degree", "Error vs Chebyshev degree CSV");
  sweep->add_option("--lambda", swa.lambdas)->required()->delimiter(',');
  sweep->add_option("--gamma", swa.gamma);
  sweep->add_option("--dim", swa.dim);
  sweep->add_option("--dist", swa.dist)->check(dist_check);
  sweep->add_option("--seeds", swa.seeds, "number of seeds averaged");
  sweep->add_option("--degree-range", swa.degree_range, "n_min:n_max:stride");
  sweep->add_option("--out", swa.out)->required();

  SweepArgs ba;
  ba.degree_range = "1:600:1";
  CLI::App* bench = app.add_subcommand("bench-cost", "Smallest degree reaching a target error");
  bench->add_option("--lambda", ba.lambdas)->required()->delimiter(',');
  bench->add_option("--gamma", ba.gamma);
  bench->add_option("--dim", ba.dim);
  bench->add_option("--dist", ba.dist)->check(dist_check);
  bench->add_option("--seeds", ba.seeds, "number of seeds averaged");
  bench->add_option("--degree-range", ba.degree_range, "search bounds n_min:n_max");
  bench->add_option("--eps", ba.eps, "target mean relative error (default 1e-10)");
  bench->add_option("--out", ba.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (project->parsed()) return cmd_project(pa);
    if (select->parsed()) return cmd_select(sa);
    if (gen->parsed()) return cmd_gen_matrix(ga);
    if (sweep->parsed()) return cmd_sweep_degree(swa);
    if (bench->parsed()) return cmd_bench_cost(ba);
  } catch (const pcp::ParameterError& e) {
    std::fprintf(stderr, "parameter error: %s\n", e.what());
    return 2;
  } catch (const pcp::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const pcp::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
