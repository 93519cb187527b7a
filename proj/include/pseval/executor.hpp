#pragma once

// Runs a JobGraph over a flat arena of binary64 slabs, one slab per
// (limb, real/imag part). The sequential engine is the reference; the
// parallel engine distributes each layer over a fixed worker pool with a
// barrier between layers and produces bitwise-identical results, because
// jobs of one layer write disjoint slots and every job's summation order
// is fixed.

#include <utility>
#include <vector>

#include "pseval/jobgraph.hpp"

namespace pseval {

struct DataArray {
  int d = 0;
  int m = 1;
  Mode mode = Mode::real;
  long total_slots = 0;
  // slab[l] holds limb l of every slot; slot s coefficient j at s*(d+1)+j
  std::vector<std::vector<double>> re, im;  // im empty in real mode

  long stride() const { return d + 1; }
  Series read_slot(long slot) const;
  void read_slot_into(long slot, Series& out) const;
  void write_slot(long slot, const Series& s);
};

struct RunReport {
  Series value;
  std::vector<Series> gradient;  // one per variable; zero series when absent
  std::vector<double> conv_layer_ms;
  std::vector<double> add_layer_ms;
  double wall_ms = 0.0;
  long long double_op_count = 0;  // per the reporting cost table
  long conv_jobs_executed = 0;
  long add_jobs_executed = 0;

  double conv_ms() const;
  double add_ms() const;
};

// fills the static region (constant, coefficients, inputs) and zeroes the
// dynamic region; coefficients must already carry any exponent folding
DataArray stage(const Polynomial& poly, const std::vector<Series>& z);

RunReport run_sequential(const JobGraph& g, DataArray& a);

// same results as run_sequential bit for bit, any worker count >= 1
RunReport run_parallel(const JobGraph& g, DataArray& a, int workers);

// binary64 operations for one run. A convolution job performs (d+1)^2
// coefficient products and d(d+1) coefficient additions, an addition job
// d+1 additions; complex coefficients cost 4 mul + 2 add per product and
// 2 add per sum. Copy jobs are memory moves and count zero. The mul/add
// split separates multiplication from addition operations.
long long flop_count(const JobGraph& g, int d, Mode mode, const OpCost& cost);
long long flop_count_mul(const JobGraph& g, int d, Mode mode, const OpCost& cost);
long long flop_count_add(const JobGraph& g, int d, Mode mode, const OpCost& cost);

// reads the value and gradient slots, applying the per-variable exponent
// multipliers; variables absent from every monomial yield a zero series
std::pair<Series, std::vector<Series>> extract(const JobGraph& g, const DataArray& a);

// one-stop evaluation: fold exponents, build the graph, stage, run, extract;
// workers = 0 selects the sequential engine
RunReport evaluate(const Polynomial& poly, const std::vector<Series>& z, int workers = 0);

}  // namespace pseval
