#include "pseval/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "pseval/executor.hpp"

namespace pseval {

namespace {

const char* mode_name(Mode mode) { return mode == Mode::cplx ? "complex" : "real"; }

}  // namespace

BenchRecord run_bench(const Problem& p, int workers, int repeats) {
  if (repeats < 1) repeats = 1;
  const JobGraph g = build_jobgraph(p.poly);
  const Polynomial folded = fold_polynomial(p.poly, p.z);

  std::vector<RunReport> runs;
  runs.reserve(static_cast<size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    DataArray a = stage(folded, p.z);
    runs.push_back(workers >= 1 ? run_parallel(g, a, workers) : run_sequential(g, a));
  }
  std::vector<size_t> order(runs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return runs[x].wall_ms < runs[y].wall_ms; });
  const RunReport& mid = runs[order[(order.size() - 1) / 2]];

  BenchRecord rec;
  rec.id = p.id;
  rec.d = p.poly.d;
  rec.m = p.poly.a0.m;
  rec.mode = p.poly.a0.mode;
  rec.workers = workers;
  rec.conv_jobs = g.conv_job_count();
  rec.add_jobs = g.add_job_count();
  rec.conv_ms = mid.conv_ms();
  rec.add_ms = mid.add_ms();
  rec.sum_ms = rec.conv_ms + rec.add_ms;
  rec.wall_ms = mid.wall_ms;
  rec.double_ops = mid.double_op_count;
  rec.gflops =
      mid.wall_ms > 0 ? static_cast<double>(mid.double_op_count) / (mid.wall_ms * 1e6) : 0.0;
  return rec;
}

std::string graph_stats_text(const Problem& p) {
  const JobGraph g = build_jobgraph(p.poly);
  std::string out;
  out += "problem " + p.id + ": n=" + std::to_string(g.n) + " N=" + std::to_string(g.N) +
         " d=" + std::to_string(g.d) + " m=" + std::to_string(p.poly.a0.m) +
         " mode=" + mode_name(p.poly.a0.mode) + "\n";
  out += "slots: " + std::to_string(g.total_slots) + " (" +
         std::to_string(g.total_slots * (g.d + 1)) + " doubles per slab)\n";
  out += "conv jobs: " + std::to_string(g.conv_job_count()) + " in " +
         std::to_string(g.conv_layers.size()) + " layers:";
  for (long s : g.conv_layer_sizes()) out += ' ' + std::to_string(s);
  out += '\n';
  out += "add jobs: " + std::to_string(g.add_job_count()) + " in " +
         std::to_string(g.add_layers.size()) + " layers:";
  for (long s : g.add_layer_sizes()) out += ' ' + std::to_string(s);
  out += '\n';
  if (g.copy_job_count() > 0)
    out += "copy jobs: " + std::to_string(g.copy_job_count()) + " (included in the conv total)\n";
  if (p.id == "p3")
    out += "note: the conv total " + std::to_string(g.conv_job_count()) +
           " counts 3 jobs per two-variable monomial and differs from the " +
           std::to_string(g.add_job_count()) + " quoted for it in some references\n";
  return out;
}

std::string bench_csv_header() {
  return "id,d,m,mode,workers,conv_jobs,add_jobs,conv_ms,add_ms,sum_ms,wall_ms,double_ops,gflops";
}

std::string bench_csv_row(const BenchRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%d,%d,%s,%d,%ld,%ld,%.6f,%.6f,%.6f,%.6f,%lld,%.6f",
                r.id.c_str(), r.d, r.m, mode_name(r.mode), r.workers, r.conv_jobs, r.add_jobs,
                r.conv_ms, r.add_ms, r.sum_ms, r.wall_ms, r.double_ops, r.gflops);
  return buf;
}

std::string bench_markdown_header() {
  return "| id | d | m | mode | workers | cnv ms | add ms | sum ms | wall ms | Gflop/s |\n"
         "|---|---:|---:|---|---:|---:|---:|---:|---:|---:|\n";
}

std::string bench_markdown_row(const BenchRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "| %s | %d | %d | %s | %d | %.3f | %.3f | %.3f | %.3f | %.3f |\n",
                r.id.c_str(), r.d, r.m, mode_name(r.mode), r.workers, r.conv_ms, r.add_ms, r.sum_ms,
                r.wall_ms, r.gflops);
  return buf;
}

std::string bench_table_markdown(const std::vector<BenchRecord>& rows) {
  std::string out = bench_markdown_header();
  for (const BenchRecord& r : rows) out += bench_markdown_row(r);
  return out;
}

}  // namespace pseval
