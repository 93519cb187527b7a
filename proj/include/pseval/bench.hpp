#pragma once

// Benchmark sweep plumbing: run a problem repeatedly, keep the run with
// median wall time, and render rows as CSV or a markdown table.

#include <cstdint>
#include <string>
#include <vector>

#include "pseval/gen.hpp"

namespace pseval {

struct BenchRecord {
  std::string id;
  int d = 0;
  int m = 1;
  Mode mode = Mode::real;
  int workers = 0;  // 0 = sequential engine
  long conv_jobs = 0;
  long add_jobs = 0;
  double conv_ms = 0;  // conv layer time, summed
  double add_ms = 0;   // add layer time, summed
  double sum_ms = 0;   // conv_ms + add_ms
  double wall_ms = 0;  // whole-graph execution, staging excluded
  long long double_ops = 0;
  double gflops = 0;  // double_ops / (wall_ms * 1e6)
};

// Builds the job graph once, then stages and runs `repeats` times; returns
// the record of the run with median wall time. workers = 0 runs sequentially.
BenchRecord run_bench(const Problem& p, int workers, int repeats);

// Slot totals and per-layer job counts of the problem's graph, as text.
std::string graph_stats_text(const Problem& p);

std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& r);
std::string bench_markdown_header();
std::string bench_markdown_row(const BenchRecord& r);
std::string bench_table_markdown(const std::vector<BenchRecord>& rows);

}  // namespace pseval
