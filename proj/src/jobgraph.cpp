#include "pseval/jobgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace pseval {

long JobGraph::conv_job_count() const {
  long c = 0;
  for (auto& l : conv_layers) c += static_cast<long>(l.size());
  return c;
}

long JobGraph::add_job_count() const {
  long c = 0;
  for (auto& l : add_layers) c += static_cast<long>(l.size());
  return c;
}

long JobGraph::copy_job_count() const {
  long c = 0;
  for (auto& l : conv_layers)
    for (auto& j : l) c += j.copy ? 1 : 0;
  return c;
}

std::vector<long> JobGraph::conv_layer_sizes() const {
  std::vector<long> s;
  for (auto& l : conv_layers) s.push_back(static_cast<long>(l.size()));
  return s;
}

std::vector<long> JobGraph::add_layer_sizes() const {
  std::vector<long> s;
  for (auto& l : add_layers) s.push_back(static_cast<long>(l.size()));
  return s;
}

void check_polynomial(const Polynomial& p) {
  if (p.n < 1) throw std::invalid_argument("polynomial needs at least one variable");
  if (p.monomials.empty()) throw std::invalid_argument("polynomial needs at least one monomial");
  if (p.a0.degree != p.d) throw std::invalid_argument("constant term degree mismatch");
  for (size_t k = 0; k < p.monomials.size(); ++k) {
    const Monomial& mo = p.monomials[k];
    if (mo.indices.empty()) throw std::invalid_argument("monomial without variables");
    if (mo.coeff.degree != p.d || mo.coeff.m != p.a0.m || mo.coeff.mode != p.a0.mode)
      throw std::invalid_argument("monomial coefficient series mismatch");
    int prev = 0;
    for (int i : mo.indices) {
      if (i <= prev) throw std::invalid_argument("monomial indices must be strictly increasing");
      if (i > p.n) throw std::invalid_argument("monomial index out of range");
      prev = i;
    }
    if (!mo.exponents.empty()) {
      if (mo.exponents.size() != mo.indices.size())
        throw std::invalid_argument("exponent count mismatch");
      for (int e : mo.exponents)
        if (e < 1) throw std::invalid_argument("exponents must be positive");
    }
  }
}

Offsets offsets(const Polynomial& p) {
  check_polynomial(p);
  Offsets off;
  off.n = p.n;
  off.N = static_cast<int>(p.monomials.size());
  off.alpha.assign(off.N + 1, 0);
  off.beta.assign(off.N + 1, 0);
  off.gamma.assign(off.N + 1, 0);
  for (int k = 0; k < off.N; ++k) {
    long nk = static_cast<long>(p.monomials[k].indices.size());
    off.alpha[k + 1] = off.alpha[k] + nk;
    off.beta[k + 1] = off.beta[k] + std::max(1L, nk - 2);
    off.gamma[k + 1] = off.gamma[k] + std::max(0L, nk - 2);
  }
  // b blocks start after all f blocks, c blocks after all b blocks
  long fext = off.alpha[off.N];
  long bext = off.beta[off.N];
  for (int k = 0; k <= off.N; ++k) {
    off.beta[k] += fext;
    off.gamma[k] += fext + bext;
  }
  off.total_slots = off.f_base() + off.gamma[off.N];
  return off;
}

std::vector<ConvJob> monomial_conv_jobs(int k, const Monomial& mono, const Offsets& off) {
  const int nk = static_cast<int>(mono.indices.size());
  auto z = [&](int pos) { return off.z_slot(mono.indices[static_cast<size_t>(pos - 1)]); };
  std::vector<ConvJob> jobs;

  // forward chain: f_1 = a_k * z_{i1}, f_l = f_{l-1} * z_{il}
  jobs.push_back({off.a_slot(k), z(1), off.f_slot(k, 1), 1, false});
  for (int l = 2; l <= nk; ++l)
    jobs.push_back({off.f_slot(k, l - 1), z(l), off.f_slot(k, l), l, false});

  if (nk == 1) {
    // the only derivative equals a_k; a copy keeps the coefficient slot
    // read-only under in-place tree accumulation
    jobs.push_back({off.a_slot(k), 0, off.b_slot(k, 1), 1, true});
    return jobs;
  }
  if (nk == 2) {
    jobs.push_back({z(2), off.a_slot(k), off.b_slot(k, 1), 1, false});
    return jobs;
  }

  // backward chain over the trailing variables, then the coefficient fold
  jobs.push_back({z(nk), z(nk - 1), off.b_slot(k, 1), 1, false});
  for (int l = 2; l <= nk - 2; ++l)
    jobs.push_back({off.b_slot(k, l - 1), z(nk - l), off.b_slot(k, l), l, false});
  jobs.push_back({off.b_slot(k, nk - 2), off.a_slot(k), off.b_slot(k, nk - 2), nk - 1, false});

  // cross products; the last one reuses the final input directly
  for (int j = 1; j <= nk - 3; ++j) {
    int layer = std::max(j, nk - 2 - j) + 1;
    jobs.push_back({off.f_slot(k, j), off.b_slot(k, nk - 2 - j), off.c_slot(k, j), layer, false});
  }
  jobs.push_back({off.f_slot(k, nk - 2), z(nk), off.c_slot(k, nk - 2), nk - 1, false});
  return jobs;
}

std::vector<std::vector<AddJob>> addition_schedule(const std::vector<std::vector<long>>& term_lists) {
  for (auto& list : term_lists)
    if (list.empty()) throw std::invalid_argument("empty term list");
  std::vector<std::vector<AddJob>> layers;
  for (auto& list : term_lists) {
    std::vector<long> survivors = list;
    int level = 1;
    while (survivors.size() > 1) {
      if (layers.size() < static_cast<size_t>(level)) layers.emplace_back();
      std::vector<long> next;
      size_t t = 0;
      for (; t + 1 < survivors.size(); t += 2) {
        layers[static_cast<size_t>(level - 1)].push_back({survivors[t], survivors[t + 1], level});
        next.push_back(survivors[t + 1]);
      }
      if (t < survivors.size()) next.push_back(survivors[t]);
      survivors.swap(next);
      ++level;
    }
  }
  return layers;
}

std::vector<std::vector<long>> gradient_term_map(const Polynomial& p, const Offsets& off) {
  std::vector<std::vector<long>> lists(static_cast<size_t>(p.n));
  for (int k = 0; k < off.N; ++k) {
    const Monomial& mo = p.monomials[static_cast<size_t>(k)];
    const int nk = static_cast<int>(mo.indices.size());
    for (int j = 1; j <= nk; ++j) {
      long slot;
      if (j == nk && nk >= 2)
        slot = off.f_slot(k, nk - 1);
      else if (j == 1)
        slot = nk >= 3 ? off.b_slot(k, nk - 2) : off.b_slot(k, 1);
      else
        slot = off.c_slot(k, j - 1);
      lists[static_cast<size_t>(mo.indices[static_cast<size_t>(j - 1)] - 1)].push_back(slot);
    }
  }
  return lists;
}

std::pair<Series, std::vector<long>> fold_exponents(const Monomial& mono,
                                                    const std::vector<Series>& z, int d) {
  const size_t nk = mono.indices.size();
  std::vector<long> mult(nk, 1);
  Series folded = mono.coeff;
  if (mono.exponents.empty()) return {folded, mult};
  for (size_t j = 0; j < nk; ++j) {
    int e = mono.exponents[j];
    if (e < 1) throw std::invalid_argument("exponents must be positive");
    mult[j] = e;
    if (e == 1) continue;
    // power table for this variable: z^2, z^3, ... built once, reused
    const Series& zi = z.at(static_cast<size_t>(mono.indices[j] - 1));
    Series power = zi;
    for (int q = 2; q <= e - 1; ++q) power = conv(power, zi);
    (void)d;
    folded = conv(folded, power);
  }
  return {folded, mult};
}

Polynomial fold_polynomial(const Polynomial& p, const std::vector<Series>& z) {
  Polynomial out = p;
  for (auto& mo : out.monomials) {
    if (mo.exponents.empty()) continue;
    mo.coeff = fold_exponents(mo, z, p.d).first;
    mo.exponents.clear();
  }
  return out;
}

JobGraph build_jobgraph(const Polynomial& p) {
  check_polynomial(p);
  Offsets off = offsets(p);
  JobGraph g;
  g.n = p.n;
  g.N = off.N;
  g.d = p.d;
  g.total_slots = off.total_slots;

  for (int k = 0; k < off.N; ++k) {
    for (const ConvJob& j : monomial_conv_jobs(k, p.monomials[static_cast<size_t>(k)], off)) {
      if (g.conv_layers.size() < static_cast<size_t>(j.layer)) g.conv_layers.resize(j.layer);
      g.conv_layers[static_cast<size_t>(j.layer - 1)].push_back(j);
    }
  }

  // value list: constant term then every monomial's full forward product
  std::vector<std::vector<long>> lists;
  std::vector<long> value_list{off.a0_slot()};
  for (int k = 0; k < off.N; ++k)
    value_list.push_back(off.f_slot(k, static_cast<int>(p.monomials[k].indices.size())));
  lists.push_back(value_list);
  std::vector<std::vector<long>> grad_lists = gradient_term_map(p, off);
  for (auto& gl : grad_lists)
    if (!gl.empty()) lists.push_back(gl);
  g.add_layers = addition_schedule(lists);

  g.value_slot = value_list.back();
  g.gradient_slots.assign(static_cast<size_t>(p.n), -1);
  for (int i = 0; i < p.n; ++i)
    if (!grad_lists[static_cast<size_t>(i)].empty())
      g.gradient_slots[static_cast<size_t>(i)] = grad_lists[static_cast<size_t>(i)].back();

  // chain-rule exponent factors: a uniform per-variable exponent becomes an
  // extraction-time multiplier; mixed exponents scale each term slot instead
  g.multipliers.assign(static_cast<size_t>(p.n), 1);
  std::vector<std::set<long>> seen(static_cast<size_t>(p.n));
  for (auto& mo : p.monomials) {
    for (size_t j = 0; j < mo.indices.size(); ++j) {
      long e = mo.exponents.empty() ? 1 : mo.exponents[j];
      seen[static_cast<size_t>(mo.indices[j] - 1)].insert(e);
    }
  }
  std::vector<bool> uniform(static_cast<size_t>(p.n), true);
  for (int i = 0; i < p.n; ++i) {
    const auto& s = seen[static_cast<size_t>(i)];
    if (s.size() == 1) {
      g.multipliers[static_cast<size_t>(i)] = *s.begin();
    } else if (s.size() > 1) {
      uniform[static_cast<size_t>(i)] = false;
    }
  }
  std::vector<size_t> cursor(static_cast<size_t>(p.n), 0);
  for (int k = 0; k < off.N; ++k) {
    const Monomial& mo = p.monomials[static_cast<size_t>(k)];
    for (size_t j = 0; j < mo.indices.size(); ++j) {
      int var = mo.indices[j] - 1;
      long slot = grad_lists[static_cast<size_t>(var)][cursor[static_cast<size_t>(var)]++];
      long e = mo.exponents.empty() ? 1 : mo.exponents[j];
      if (!uniform[static_cast<size_t>(var)] && e != 1) g.term_scales.push_back({slot, e});
    }
  }
  return g;
}

namespace {

std::string job_name(const ConvJob& j, int layer, size_t pos) {
  return "conv layer " + std::to_string(layer) + " job " + std::to_string(pos) +
         " (out slot " + std::to_string(j.out) + ")";
}

}  // namespace

Validation validate(const JobGraph& g) {
  const long static_top = 1 + g.N + g.n;  // slots below this are inputs
  std::vector<int> first_write(static_cast<size_t>(g.total_slots), -1);

  for (size_t L = 0; L < g.conv_layers.size(); ++L) {
    std::set<long> writes;
    for (size_t t = 0; t < g.conv_layers[L].size(); ++t) {
      const ConvJob& j = g.conv_layers[L][t];
      if (j.out < static_top || j.out >= g.total_slots)
        return {false, job_name(j, static_cast<int>(L + 1), t) + ": writes outside the dynamic region"};
      if (!writes.insert(j.out).second)
        return {false, job_name(j, static_cast<int>(L + 1), t) + ": duplicate write in one layer"};
      if (!j.copy && j.out == j.in2)
        return {false, job_name(j, static_cast<int>(L + 1), t) + ": output aliases second input"};
    }
    for (size_t t = 0; t < g.conv_layers[L].size(); ++t) {
      const ConvJob& j = g.conv_layers[L][t];
      long ins[2] = {j.in1, j.copy ? j.in1 : j.in2};
      for (long s : ins) {
        if (s < 0 || s >= g.total_slots)
          return {false, job_name(j, static_cast<int>(L + 1), t) + ": input slot out of range"};
        if (s < static_top) continue;
        bool written_earlier = first_write[static_cast<size_t>(s)] >= 0 &&
                               first_write[static_cast<size_t>(s)] < static_cast<int>(L);
        if (!written_earlier)
          return {false, job_name(j, static_cast<int>(L + 1), t) + ": reads slot " +
                             std::to_string(s) + " not written in an earlier layer"};
        if (writes.count(s) && s != j.out)
          return {false, job_name(j, static_cast<int>(L + 1), t) + ": reads slot " +
                             std::to_string(s) + " written by another job in the same layer"};
      }
    }
    for (const ConvJob& j : g.conv_layers[L])
      if (first_write[static_cast<size_t>(j.out)] < 0)
        first_write[static_cast<size_t>(j.out)] = static_cast<int>(L);
  }

  for (size_t L = 0; L < g.add_layers.size(); ++L) {
    std::set<long> writes;
    for (size_t t = 0; t < g.add_layers[L].size(); ++t) {
      const AddJob& j = g.add_layers[L][t];
      std::string name = "add layer " + std::to_string(L + 1) + " job " + std::to_string(t);
      if (j.src == j.dst) return {false, name + ": source equals destination"};
      for (long s : {j.src, j.dst}) {
        if (s < 0 || s >= g.total_slots) return {false, name + ": slot out of range"};
        // every addition input must exist before the first addition layer
        if (s >= static_top && first_write[static_cast<size_t>(s)] < 0)
          return {false, name + ": slot " + std::to_string(s) + " never written by a conv job"};
      }
      if (j.dst < static_top) return {false, name + ": accumulates into a static slot"};
      if (!writes.insert(j.dst).second) return {false, name + ": duplicate write in one layer"};
    }
  }

  // coverage: every dynamic slot is written by some job
  std::vector<bool> written(static_cast<size_t>(g.total_slots), false);
  for (auto& layer : g.conv_layers)
    for (auto& j : layer) written[static_cast<size_t>(j.out)] = true;
  for (long s = static_top; s < g.total_slots; ++s)
    if (!written[static_cast<size_t>(s)])
      return {false, "slot " + std::to_string(s) + " is never written"};

  return {true, ""};
}

}  // namespace pseval
