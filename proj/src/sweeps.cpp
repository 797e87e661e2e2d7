#include "pcp/sweeps.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <tuple>

#include "pcp/errors.hpp"
#include "pcp/ridge.hpp"

namespace pcp {

namespace {

constexpr double kSweepEpsPrime = 1e-13;

void validate_config(const SweepConfig& cfg) {
  if (cfg.lambdas.empty()) throw InvalidArgument("sweep: lambda list is empty");
  if (cfg.dim < 2) throw InvalidArgument("sweep: dim must be at least 2");
  if (cfg.seeds < 1) throw InvalidArgument("sweep: need at least one seed");
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min || cfg.stride < 1) {
    throw InvalidArgument("sweep: degree range must satisfy 1 <= n_min <= n_max, stride >= 1");
  }
  for (double lam : cfg.lambdas) ThresholdSpec{lam, cfg.gamma}.validate();
}

const FilterKind kMethods[3] = {FilterKind::Ridge, FilterKind::Poly1, FilterKind::Poly2};

const char* method_name(FilterKind kind) {
  return kind == FilterKind::Ridge ? "quick" : to_string(kind);
}

struct SeedFixture {
  GeneratedMatrix gm;
  DenseVector chi;
  DenseVector exact;
};

SeedFixture make_fixture(const SweepConfig& cfg, double lambda, std::uint64_t seed) {
  SeedFixture fx;
  fx.gm = gen_matrix({cfg.dim, lambda, cfg.gamma, cfg.dist, seed});
  Rng chi_rng(seed ^ kChiStreamSalt);
  fx.chi = random_unit_vector(cfg.dim, chi_rng);
  fx.exact = exact_pcp(fx.gm.dec, lambda, fx.chi);
  return fx;
}

}  // namespace

ProjectionReport run_pipeline(FilterKind kind, const OperatorHandle& g, const DenseVector& chi,
                              double lambda, double gamma, std::size_t n, double eps_prime) {
  if (kind == FilterKind::Ridge) {
    RidgeSolverConfig cfg;
    cfg.eps_prime = eps_prime;
    return quick_pcp(g, chi, lambda, gamma, n, cfg);
  }
  return poly_pcp(g, chi, make_filter(kind, lambda, gamma), n);
}

std::vector<DegreeSweepRow> run_degree_sweep(const SweepConfig& cfg) {
  validate_config(cfg);
  std::vector<std::size_t> degrees;
  for (std::size_t n = cfg.n_min; n <= cfg.n_max; n += cfg.stride) degrees.push_back(n);
  const std::size_t nd = degrees.size();
  const std::size_t ncell = cfg.lambdas.size() * cfg.seeds;

  // cells[cell][method * nd + k] = (error, matvecs, cg); each cell slot is
  // written by exactly one iteration, so results are schedule-independent.
  struct Obs {
    double err, mv, cg;
  };
  std::vector<std::vector<Obs>> cells(ncell);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t cc = 0; cc < static_cast<std::ptrdiff_t>(ncell); ++cc) {
    const auto cell = static_cast<std::size_t>(cc);
    const double lambda = cfg.lambdas[cell / cfg.seeds];
    const std::uint64_t seed = cell % cfg.seeds + 1;
    const SeedFixture fx = make_fixture(cfg, lambda, seed);
    auto& slot = cells[cell];
    slot.resize(3 * nd);
    for (int m = 0; m < 3; ++m) {
      for (std::size_t k = 0; k < nd; ++k) {
        const ProjectionReport rep = run_pipeline(kMethods[m], fx.gm.handle, fx.chi, lambda,
                                                  cfg.gamma, degrees[k], kSweepEpsPrime);
        slot[m * nd + k] = {relative_error(rep.zeta, fx.exact),
                            static_cast<double>(rep.matvecs),
                            static_cast<double>(rep.cg_iterations)};
      }
    }
  }

  std::vector<DegreeSweepRow> rows;
  rows.reserve(cfg.lambdas.size() * 3 * nd);
  for (std::size_t il = 0; il < cfg.lambdas.size(); ++il) {
    for (int m = 0; m < 3; ++m) {
      for (std::size_t k = 0; k < nd; ++k) {
        DegreeSweepRow row;
        row.lambda = cfg.lambdas[il];
        row.method = method_name(kMethods[m]);
        row.degree = degrees[k];
        for (std::size_t is = 0; is < cfg.seeds; ++is) {
          const Obs& o = cells[il * cfg.seeds + is][m * nd + k];
          row.mean_error += o.err;
          row.mean_matvecs += o.mv;
          row.mean_cg_iterations += o.cg;
        }
        const double denom = static_cast<double>(cfg.seeds);
        row.mean_error /= denom;
        row.mean_matvecs /= denom;
        row.mean_cg_iterations /= denom;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<CostBenchRow> run_cost_bench(const SweepConfig& cfg, double target) {
  validate_config(cfg);
  if (!(target > 0.0)) throw InvalidArgument("bench: target error must be positive");

  std::vector<CostBenchRow> rows;
  for (double lambda : cfg.lambdas) {
    std::vector<SeedFixture> fixtures(cfg.seeds);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t is = 0; is < static_cast<std::ptrdiff_t>(cfg.seeds); ++is) {
      fixtures[is] = make_fixture(cfg, lambda, static_cast<std::uint64_t>(is) + 1);
    }

    for (const FilterKind kind : kMethods) {
      const auto t0 = std::chrono::steady_clock::now();
      // (mean error, mean matvecs, mean cg) per evaluated degree.
      std::map<std::size_t, std::tuple<double, double, double>> seen;
      auto eval = [&](std::size_t n) {
        auto it = seen.find(n);
        if (it != seen.end()) return it->second;
        std::vector<std::tuple<double, double, double>> obs(cfg.seeds);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t is = 0; is < static_cast<std::ptrdiff_t>(cfg.seeds); ++is) {
          const SeedFixture& fx = fixtures[is];
          const ProjectionReport rep = run_pipeline(kind, fx.gm.handle, fx.chi, lambda,
                                                    cfg.gamma, n, kSweepEpsPrime);
          obs[is] = {relative_error(rep.zeta, fx.exact), static_cast<double>(rep.matvecs),
                     static_cast<double>(rep.cg_iterations)};
        }
        double e = 0.0, mv = 0.0, cg = 0.0;
        for (const auto& o : obs) {
          e += std::get<0>(o);
          mv += std::get<1>(o);
          cg += std::get<2>(o);
        }
        const double denom = static_cast<double>(cfg.seeds);
        auto res = std::make_tuple(e / denom, mv / denom, cg / denom);
        seen.emplace(n, res);
        return res;
      };

      CostBenchRow row;
      row.lambda = lambda;
      row.method = method_name(kind);

      // Doubling to bracket the target, then bisection on (lo, hi].
      std::size_t hi = cfg.n_min;
      bool reached = std::get<0>(eval(hi)) <= target;
      if (!reached) {
        std::size_t lo = hi;
        while (hi < cfg.n_max && !reached) {
          lo = hi;
          hi = std::min(hi * 2, cfg.n_max);
          reached = std::get<0>(eval(hi)) <= target;
        }
        while (reached && hi - lo > 1) {
          const std::size_t mid = lo + (hi - lo) / 2;
          if (std::get<0>(eval(mid)) <= target) {
            hi = mid;
          } else {
            lo = mid;
          }
        }
      }
      // When the cap is insufficient the row keeps the cap's numbers and is
      // flagged instead of failing the whole sweep.
      row.reached = reached;
      row.degree = reached ? hi : 0;
      const auto at = eval(hi);
      row.mean_error = std::get<0>(at);
      row.mean_matvecs = std::get<1>(at);
      row.mean_cg_iterations = std::get<2>(at);
      row.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::FILE* open_or_throw(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw InvalidArgument("cannot open output file: " + path);
  return f;
}

// Shortest decimal form that parses back to the same double, so the files
// stay exact without carrying fifteen spurious digits on values like 0.1.
std::string fmt_double(double v) {
  char buf[32];
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void write_config_comment(std::FILE* f, const SweepConfig& cfg) {
  std::fprintf(f, "# gamma=%s dim=%zu dist=%s seeds=%zu degree-range=%zu:%zu:%zu\n",
               fmt_double(cfg.gamma).c_str(), cfg.dim,
               cfg.dist == EigenDist::UniformEigen ? "uniform" : "random", cfg.seeds,
               cfg.n_min, cfg.n_max, cfg.stride);
}

}  // namespace

void write_degree_sweep_csv(const std::string& path, const SweepConfig& cfg,
                            const std::vector<DegreeSweepRow>& rows) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "# error-vs-degree sweep: mean over seeds of the relative error\n");
  write_config_comment(f, cfg);
  std::fprintf(f, "lambda,method,degree,mean_error,mean_matvecs,mean_cg_iterations\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%s,%zu,%s,%s,%s\n", fmt_double(r.lambda).c_str(), r.method.c_str(),
                 r.degree, fmt_double(r.mean_error).c_str(), fmt_double(r.mean_matvecs).c_str(),
                 fmt_double(r.mean_cg_iterations).c_str());
  }
  std::fclose(f);
}

void write_cost_bench_csv(const std::string& path, const SweepConfig& cfg, double target,
                          const std::vector<CostBenchRow>& rows) {
  std::FILE* f = open_or_throw(path);
  std::fprintf(f, "# cost-vs-lambda bench: smallest degree with mean error <= target\n");
  std::fprintf(f, "# target=%s (wall_seconds is informational; exclude it when comparing)\n",
               fmt_double(target).c_str());
  write_config_comment(f, cfg);
  std::fprintf(f,
               "lambda,method,degree,reached,mean_error,mean_matvecs,mean_cg_iterations,"
               "wall_seconds\n");
  for (const auto& r : rows) {
    std::fprintf(f, "%s,%s,%zu,%d,%s,%s,%s,%.6f\n", fmt_double(r.lambda).c_str(),
                 r.method.c_str(), r.degree, r.reached ? 1 : 0, fmt_double(r.mean_error).c_str(),
                 fmt_double(r.mean_matvecs).c_str(), fmt_double(r.mean_cg_iterations).c_str(),
                 r.wall_seconds);
  }
  std::fclose(f);
}

}  // namespace pcp
