#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "pseval/bench.hpp"
#include "pseval/executor.hpp"
#include "pseval/gen.hpp"
#include "pseval/oracle.hpp"
#include "pseval/problem_io.hpp"

using namespace pseval;

namespace {

Mode parse_mode(const std::string& s) { return s == "complex" ? Mode::cplx : Mode::real; }

int resolve_workers(int w) {
  if (w >= 1) return w;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

// benchmark id -> generated instance, anything else -> problem file path
Problem load_target(const std::string& target, int d, int m, Mode mode, std::uint64_t seed) {
  if (known_benchmark_id(target)) return gen_benchmark(target, d, m, mode, seed);
  return read_problem(target);
}

double series_norm(const Series& s) {
  double n = 0;
  for (const Coeff& co : s.c) {
    n = std::max(n, std::fabs(md_to_double(co.re)));
    if (s.mode == Mode::cplx) n = std::max(n, std::fabs(md_to_double(co.im)));
  }
  return n;
}

double series_gap(const Series& x, const Series& y) {
  double g = 0;
  for (size_t k = 0; k < x.c.size(); ++k) {
    g = std::max(g, std::fabs(md_to_double(md_sub(x.c[k].re, y.c[k].re))));
    if (x.mode == Mode::cplx)
      g = std::max(g, std::fabs(md_to_double(md_sub(x.c[k].im, y.c[k].im))));
  }
  return g;
}

// leading-limb convolution work for one full evaluation plus gradient;
// the auto mode of verify skips the reference above this
long long oracle_cost_estimate(const Polynomial& p) {
  long long q = 1;
  for (const Monomial& mo : p.monomials) {
    long long t = 0;
    if (mo.exponents.empty())
      t = static_cast<long long>(mo.indices.size());
    else
      for (int e : mo.exponents) t += e;
    q = std::max(q, t);
  }
  const long long len = p.d + 1;
  return static_cast<long long>(p.monomials.size()) * q * q * len * len * p.a0.m * p.a0.m;
}

int do_verify(const Problem& p, int workers, const std::string& oracle_flag) {
  const int w = resolve_workers(workers);
  std::printf("problem %s: n=%d N=%zu d=%d m=%d mode=%s\n", p.id.c_str(), p.poly.n,
              p.poly.monomials.size(), p.poly.d, p.poly.a0.m,
              p.poly.a0.mode == Mode::cplx ? "complex" : "real");

  const JobGraph g = build_jobgraph(p.poly);
  const Polynomial folded = fold_polynomial(p.poly, p.z);
  DataArray a1 = stage(folded, p.z);
  const RunReport seq = run_sequential(g, a1);
  DataArray a2 = stage(folded, p.z);
  const RunReport par = run_parallel(g, a2, w);

  bool engines_equal = series_bitwise_equal(seq.value, par.value);
  double engine_gap = series_gap(seq.value, par.value);
  for (int i = 0; i < p.poly.n; ++i) {
    engines_equal = engines_equal && series_bitwise_equal(seq.gradient[static_cast<size_t>(i)],
                                                          par.gradient[static_cast<size_t>(i)]);
    engine_gap = std::max(engine_gap, series_gap(seq.gradient[static_cast<size_t>(i)],
                                                 par.gradient[static_cast<size_t>(i)]));
  }
  if (engines_equal)
    std::printf("engines: sequential vs parallel (%d workers): bitwise equal\n", w);
  else
    std::printf("engines: sequential vs parallel (%d workers): MISMATCH, max |difference| %.3e\n",
                w, engine_gap);

  bool oracle_ok = true;
  if (oracle_flag == "off") {
    std::printf("oracle: skipped (disabled)\n");
  } else if (oracle_flag == "auto" && oracle_cost_estimate(p.poly) > 1000000) {
    std::printf("oracle: skipped (instance too large for auto mode; --oracle on forces it)\n");
  } else if (!within_oracle_guard(p.poly)) {
    std::printf("oracle: refused, instance exceeds the direct-evaluation size guard\n");
    return 2;
  } else {
    const Evaluation ref = eval_direct(p.poly, p.z);
    double norm = std::max(1.0, series_norm(ref.value));
    double gap = series_gap(seq.value, ref.value);
    for (int i = 0; i < p.poly.n; ++i) {
      norm = std::max(norm, series_norm(ref.gradient[static_cast<size_t>(i)]));
      gap = std::max(gap, series_gap(seq.gradient[static_cast<size_t>(i)],
                                     ref.gradient[static_cast<size_t>(i)]));
    }
    const double tol = std::ldexp(1.0, 32 - 52 * p.poly.a0.m);
    const double rel = gap / norm;
    oracle_ok = rel <= tol;
    std::printf("oracle: max coefficient discrepancy %.3e relative (tolerance %.3e): %s\n", rel,
                tol, oracle_ok ? "ok" : "MISMATCH");
  }

  const bool pass = engines_equal && oracle_ok;
  std::printf("verify: %s\n", pass ? "PASS" : "FAIL");
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evaluation and differentiation of sparse polynomials at truncated power series"};
  app.require_subcommand(1);

  const std::vector<int> precision_levels = {1, 2, 3, 4, 5, 8, 10};
  const std::vector<int> default_sweep = {0, 8, 15, 31, 63, 95, 127, 152, 159, 191};

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a benchmark problem file");
  std::string gen_id, gen_out;
  int gen_d = 8, gen_m = 2;
  std::string gen_mode = "real";
  std::uint64_t gen_seed = 7;
  gen_cmd->add_option("id", gen_id, "benchmark id (p1, p2, p3)")->required();
  gen_cmd->add_option("out", gen_out, "output file path")->required();
  gen_cmd->add_option("--degree", gen_d, "truncation degree")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--precision", gen_m, "limbs per coefficient")
      ->check(CLI::IsMember(precision_levels));
  gen_cmd->add_option("--mode", gen_mode, "coefficient field")
      ->check(CLI::IsMember({"real", "complex"}));
  gen_cmd->add_option("--seed", gen_seed, "random seed");

  // verify
  auto* ver_cmd = app.add_subcommand(
      "verify", "cross-check the sequential engine, the parallel engine and the reference");
  std::string ver_target;
  int ver_d = 8, ver_m = 2, ver_workers = 0;
  std::string ver_mode = "real", ver_oracle = "auto";
  std::uint64_t ver_seed = 7;
  ver_cmd->add_option("target", ver_target, "benchmark id or problem file")->required();
  ver_cmd->add_option("--degree", ver_d, "truncation degree (ids only)")
      ->check(CLI::NonNegativeNumber);
  ver_cmd->add_option("--precision", ver_m, "limbs per coefficient (ids only)")
      ->check(CLI::IsMember(precision_levels));
  ver_cmd->add_option("--mode", ver_mode, "coefficient field (ids only)")
      ->check(CLI::IsMember({"real", "complex"}));
  ver_cmd->add_option("--seed", ver_seed, "random seed (ids only)");
  ver_cmd->add_option("--workers", ver_workers, "parallel worker count, 0 = hardware threads");
  ver_cmd->add_option("--oracle", ver_oracle, "reference evaluation: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}));

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a timing sweep and print a table");
  std::string bench_target = "p1";
  std::vector<int> bench_degrees, bench_precisions;
  int bench_workers = 0, bench_repeats = 3;
  std::string bench_mode = "real", bench_schedule = "parallel", bench_csv;
  std::uint64_t bench_seed = 7;
  bench_cmd->add_option("target", bench_target, "benchmark id or problem file");
  bench_cmd->add_option("--degree", bench_degrees, "degrees to sweep (ids only)")
      ->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--precision", bench_precisions, "precision levels to sweep (ids only)")
      ->check(CLI::IsMember(precision_levels));
  bench_cmd->add_option("--mode", bench_mode, "coefficient field (ids only)")
      ->check(CLI::IsMember({"real", "complex"}));
  bench_cmd->add_option("--seed", bench_seed, "random seed (ids only)");
  bench_cmd->add_option("--workers", bench_workers, "parallel worker count, 0 = hardware threads");
  bench_cmd->add_option("--repeats", bench_repeats, "runs per cell, median reported")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--schedule", bench_schedule, "engine selection")
      ->check(CLI::IsMember({"sequential", "parallel"}));
  bench_cmd->add_option("--csv", bench_csv, "also write rows to this CSV file");

  // graph-stats
  auto* stats_cmd = app.add_subcommand("graph-stats", "print job and layer counts only");
  std::string stats_target;
  int stats_d = 8, stats_m = 2;
  std::string stats_mode = "real";
  std::uint64_t stats_seed = 7;
  stats_cmd->add_option("target", stats_target, "benchmark id or problem file")->required();
  stats_cmd->add_option("--degree", stats_d, "truncation degree (ids only)")
      ->check(CLI::NonNegativeNumber);
  stats_cmd->add_option("--precision", stats_m, "limbs per coefficient (ids only)")
      ->check(CLI::IsMember(precision_levels));
  stats_cmd->add_option("--mode", stats_mode, "coefficient field (ids only)")
      ->check(CLI::IsMember({"real", "complex"}));
  stats_cmd->add_option("--seed", stats_seed, "random seed (ids only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(gen_cmd)) {
      if (!known_benchmark_id(gen_id)) throw std::runtime_error("unknown benchmark id '" + gen_id + "'");
      const Problem p = gen_benchmark(gen_id, gen_d, gen_m, parse_mode(gen_mode), gen_seed);
      write_problem(gen_out, p);
      std::printf("wrote %s: %s n=%d N=%zu d=%d m=%d mode=%s seed=%llu\n", gen_out.c_str(),
                  p.id.c_str(), p.poly.n, p.poly.monomials.size(), p.poly.d, p.poly.a0.m,
                  gen_mode.c_str(), static_cast<unsigned long long>(p.seed));
      return 0;
    }

    if (app.got_subcommand(ver_cmd)) {
      const Problem p = load_target(ver_target, ver_d, ver_m, parse_mode(ver_mode), ver_seed);
      return do_verify(p, ver_workers, ver_oracle);
    }

    if (app.got_subcommand(stats_cmd)) {
      const Problem p =
          load_target(stats_target, stats_d, stats_m, parse_mode(stats_mode), stats_seed);
      std::fputs(graph_stats_text(p).c_str(), stdout);
      return 0;
    }

    // bench
    const bool default_degrees = bench_degrees.empty();
    if (bench_degrees.empty()) bench_degrees = default_sweep;
    if (bench_precisions.empty()) bench_precisions = {2};
    const int workers = bench_schedule == "parallel" ? resolve_workers(bench_workers) : 0;

    std::vector<BenchRecord> rows;
    if (known_benchmark_id(bench_target)) {
      std::fputs(graph_stats_text(gen_benchmark(bench_target, bench_degrees.front(),
                                                bench_precisions.front(),
                                                parse_mode(bench_mode), bench_seed))
                     .c_str(),
                 stdout);
      std::printf("\n%s", bench_markdown_header().c_str());
      std::fflush(stdout);
      for (int m : bench_precisions)
        for (int d : bench_degrees) {
          // the default sweep stops at 152 for deca precision, as the
          // reference tables do
          if (default_degrees && m == 10 && d > 152) continue;
          const Problem p = gen_benchmark(bench_target, d, m, parse_mode(bench_mode), bench_seed);
          rows.push_back(run_bench(p, workers, bench_repeats));
          std::fputs(bench_markdown_row(rows.back()).c_str(), stdout);
          std::fflush(stdout);
        }
    } else {
      const Problem p = read_problem(bench_target);
      std::fputs(graph_stats_text(p).c_str(), stdout);
      std::printf("\n%s", bench_markdown_header().c_str());
      std::fflush(stdout);
      rows.push_back(run_bench(p, workers, bench_repeats));
      std::fputs(bench_markdown_row(rows.back()).c_str(), stdout);
    }

    if (!bench_csv.empty()) {
      std::ofstream f(bench_csv, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open '" + bench_csv + "' for writing");
      f << bench_csv_header() << '\n';
      for (const BenchRecord& r : rows) f << bench_csv_row(r) << '\n';
      std::printf("wrote %zu rows to %s\n", rows.size(), bench_csv.c_str());
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
