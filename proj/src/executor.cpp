#include "pseval/executor.hpp"

#include <atomic>
#include <barrier>
#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <thread>

namespace pseval {

namespace {

using steady = std::chrono::steady_clock;

double ms_since(steady::time_point t0) {
  return std::chrono::duration<double, std::milli>(steady::now() - t0).count();
}

}  // namespace

double RunReport::conv_ms() const {
  double t = 0.0;
  for (double v : conv_layer_ms) t += v;
  return t;
}

double RunReport::add_ms() const {
  double t = 0.0;
  for (double v : add_layer_ms) t += v;
  return t;
}

Series DataArray::read_slot(long slot) const {
  Series s = make_series(d, m, mode);
  read_slot_into(slot, s);
  return s;
}

void DataArray::read_slot_into(long slot, Series& out) const {
  if (out.degree != d || out.m != m || out.mode != mode) out = make_series(d, m, mode);
  const size_t base = static_cast<size_t>(slot) * static_cast<size_t>(stride());
  for (int l = 0; l < m; ++l) {
    const double* src = re[static_cast<size_t>(l)].data() + base;
    for (int j = 0; j <= d; ++j) out.c[static_cast<size_t>(j)].re.limb[static_cast<size_t>(l)] = src[j];
  }
  if (mode == Mode::cplx) {
    for (int l = 0; l < m; ++l) {
      const double* src = im[static_cast<size_t>(l)].data() + base;
      for (int j = 0; j <= d; ++j) out.c[static_cast<size_t>(j)].im.limb[static_cast<size_t>(l)] = src[j];
    }
  }
}

void DataArray::write_slot(long slot, const Series& s) {
  const size_t base = static_cast<size_t>(slot) * static_cast<size_t>(stride());
  for (int l = 0; l < m; ++l) {
    double* dst = re[static_cast<size_t>(l)].data() + base;
    for (int j = 0; j <= d; ++j) dst[j] = s.c[static_cast<size_t>(j)].re.limb[static_cast<size_t>(l)];
  }
  if (mode == Mode::cplx) {
    for (int l = 0; l < m; ++l) {
      double* dst = im[static_cast<size_t>(l)].data() + base;
      for (int j = 0; j <= d; ++j) dst[j] = s.c[static_cast<size_t>(j)].im.limb[static_cast<size_t>(l)];
    }
  }
}

DataArray stage(const Polynomial& poly, const std::vector<Series>& z) {
  check_polynomial(poly);
  for (const Monomial& mo : poly.monomials)
    for (int e : mo.exponents)
      if (e != 1) throw std::invalid_argument("stage expects exponent-folded coefficients");
  if (static_cast<int>(z.size()) != poly.n)
    throw std::invalid_argument("input series count does not match the variable count");
  for (const Series& zi : z) {
    if (zi.degree != poly.d) throw std::invalid_argument("input series degree mismatch");
    if (zi.m != poly.a0.m) throw std::invalid_argument("input series precision mismatch");
    if (zi.mode != poly.a0.mode) throw std::invalid_argument("input series mode mismatch");
  }

  Offsets off = offsets(poly);
  DataArray a;
  a.d = poly.d;
  a.m = poly.a0.m;
  a.mode = poly.a0.mode;
  a.total_slots = off.total_slots;
  const size_t slab = static_cast<size_t>(off.total_slots) * static_cast<size_t>(a.stride());
  a.re.assign(static_cast<size_t>(a.m), std::vector<double>(slab, 0.0));
  if (a.mode == Mode::cplx) a.im.assign(static_cast<size_t>(a.m), std::vector<double>(slab, 0.0));

  a.write_slot(off.a0_slot(), poly.a0);
  for (int k = 0; k < off.N; ++k) a.write_slot(off.a_slot(k), poly.monomials[static_cast<size_t>(k)].coeff);
  for (int i = 1; i <= poly.n; ++i) a.write_slot(off.z_slot(i), z[static_cast<size_t>(i - 1)]);
  return a;
}

namespace {

// one execution phase = one barrier-delimited batch of independent jobs
enum class PhaseKind { conv, scale, add };

struct Phase {
  PhaseKind kind;
  size_t layer;  // index into conv_layers / add_layers; unused for scale
  size_t njobs;
};

std::vector<Phase> make_phases(const JobGraph& g) {
  std::vector<Phase> phases;
  for (size_t L = 0; L < g.conv_layers.size(); ++L)
    phases.push_back({PhaseKind::conv, L, g.conv_layers[L].size()});
  if (!g.term_scales.empty()) phases.push_back({PhaseKind::scale, 0, g.term_scales.size()});
  for (size_t L = 0; L < g.add_layers.size(); ++L)
    phases.push_back({PhaseKind::add, L, g.add_layers[L].size()});
  return phases;
}

// per-worker input buffers: inputs are copied out of the arena before the
// output is written, which keeps in-place folds and accumulations safe
struct Scratch {
  Series x, y;
};

void run_job(const JobGraph& g, DataArray& a, const Phase& ph, size_t i, Scratch& s) {
  switch (ph.kind) {
    case PhaseKind::conv: {
      const ConvJob& j = g.conv_layers[ph.layer][i];
      a.read_slot_into(j.in1, s.x);
      if (j.copy) {
        a.write_slot(j.out, s.x);
        return;
      }
      a.read_slot_into(j.in2, s.y);
      a.write_slot(j.out, conv(s.x, s.y));
      return;
    }
    case PhaseKind::scale: {
      const TermScale& t = g.term_scales[i];
      a.read_slot_into(t.slot, s.x);
      a.write_slot(t.slot, series_scale_int(s.x, t.factor));
      return;
    }
    case PhaseKind::add: {
      const AddJob& j = g.add_layers[ph.layer][i];
      a.read_slot_into(j.dst, s.x);
      a.read_slot_into(j.src, s.y);
      a.write_slot(j.dst, series_add(s.x, s.y));
      return;
    }
  }
}

void record_phase(RunReport& r, const Phase& ph, double dt) {
  if (ph.kind == PhaseKind::conv) r.conv_layer_ms.push_back(dt);
  if (ph.kind == PhaseKind::add) r.add_layer_ms.push_back(dt);
}

void attach_results(const JobGraph& g, const DataArray& a, RunReport& r) {
  auto [value, gradient] = extract(g, a);
  r.value = std::move(value);
  r.gradient = std::move(gradient);
  r.double_op_count = flop_count(g, a.d, a.mode, reporting_cost(a.m));
}

}  // namespace

RunReport run_sequential(const JobGraph& g, DataArray& a) {
  RunReport r;
  const std::vector<Phase> phases = make_phases(g);
  Scratch s{make_series(a.d, a.m, a.mode), make_series(a.d, a.m, a.mode)};
  const auto t_all = steady::now();
  for (const Phase& ph : phases) {
    const auto t0 = steady::now();
    for (size_t i = 0; i < ph.njobs; ++i) run_job(g, a, ph, i, s);
    record_phase(r, ph, ms_since(t0));
    if (ph.kind == PhaseKind::conv) r.conv_jobs_executed += static_cast<long>(ph.njobs);
    if (ph.kind == PhaseKind::add) r.add_jobs_executed += static_cast<long>(ph.njobs);
  }
  r.wall_ms = ms_since(t_all);
  attach_results(g, a, r);
  return r;
}

RunReport run_parallel(const JobGraph& g, DataArray& a, int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be at least 1");
  RunReport r;
  const std::vector<Phase> phases = make_phases(g);

  std::atomic<size_t> cursor{0};
  std::atomic<long> conv_done{0}, add_done{0};
  // the coordinator participates in both gates of every phase
  std::barrier<> gate(static_cast<std::ptrdiff_t>(workers) + 1);

  auto body = [&]() {
    Scratch s{make_series(a.d, a.m, a.mode), make_series(a.d, a.m, a.mode)};
    long conv_local = 0, add_local = 0;
    for (const Phase& ph : phases) {
      gate.arrive_and_wait();  // phase opens: cursor is reset
      size_t i;
      while ((i = cursor.fetch_add(1, std::memory_order_relaxed)) < ph.njobs) {
        run_job(g, a, ph, i, s);
        if (ph.kind == PhaseKind::conv) ++conv_local;
        if (ph.kind == PhaseKind::add) ++add_local;
      }
      gate.arrive_and_wait();  // phase closes: all writes visible beyond here
    }
    conv_done += conv_local;
    add_done += add_local;
  };

  const auto t_all = steady::now();
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);

  for (const Phase& ph : phases) {
    cursor.store(0, std::memory_order_relaxed);
    const auto t0 = steady::now();
    gate.arrive_and_wait();
    gate.arrive_and_wait();
    record_phase(r, ph, ms_since(t0));
  }
  for (std::thread& t : pool) t.join();

  r.wall_ms = ms_since(t_all);
  r.conv_jobs_executed = conv_done.load();
  r.add_jobs_executed = add_done.load();
  attach_results(g, a, r);
  return r;
}

long long flop_count_mul(const JobGraph& g, int d, Mode mode, const OpCost& cost) {
  const long long C = g.conv_job_count() - g.copy_job_count();
  const long long d1 = d + 1;
  const long long per_product = mode == Mode::cplx ? 4 : 1;
  return C * d1 * d1 * per_product * cost.mul_cost;
}

long long flop_count_add(const JobGraph& g, int d, Mode mode, const OpCost& cost) {
  const long long C = g.conv_job_count() - g.copy_job_count();
  const long long A = g.add_job_count();
  const long long d1 = d + 1;
  long long conv_adds = C * d * d1;              // accumulation
  if (mode == Mode::cplx) conv_adds = conv_adds * 2 + C * d1 * d1 * 2;  // + product cross terms
  const long long add_adds = A * d1 * (mode == Mode::cplx ? 2 : 1);
  return (conv_adds + add_adds) * cost.add_cost;
}

long long flop_count(const JobGraph& g, int d, Mode mode, const OpCost& cost) {
  return flop_count_mul(g, d, mode, cost) + flop_count_add(g, d, mode, cost);
}

std::pair<Series, std::vector<Series>> extract(const JobGraph& g, const DataArray& a) {
  Series value = a.read_slot(g.value_slot);
  std::vector<Series> gradient;
  gradient.reserve(static_cast<size_t>(g.n));
  for (int i = 0; i < g.n; ++i) {
    const long slot = g.gradient_slots[static_cast<size_t>(i)];
    if (slot < 0) {
      gradient.push_back(make_series(a.d, a.m, a.mode));
      continue;
    }
    Series gi = a.read_slot(slot);
    const long mult = g.multipliers[static_cast<size_t>(i)];
    gradient.push_back(mult == 1 ? std::move(gi) : series_scale_int(gi, mult));
  }
  return {std::move(value), std::move(gradient)};
}

RunReport evaluate(const Polynomial& poly, const std::vector<Series>& z, int workers) {
  JobGraph g = build_jobgraph(poly);
  Polynomial folded = fold_polynomial(poly, z);
  DataArray a = stage(folded, z);
  return workers >= 1 ? run_parallel(g, a, workers) : run_sequential(g, a);
}

}  // namespace pseval
