#include "pseval/multidouble.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace pseval {

MultiDouble renormalize(const std::vector<double>& expansion, int m) {
  check_precision(m);
  MultiDouble r(m);
  int n = static_cast<int>(expansion.size());
  if (n == 0) return r;
  if (n == m && is_normalized_expansion(expansion.data(), m)) {
    std::copy(expansion.begin(), expansion.end(), r.limb.begin());
    return r;
  }
  std::vector<double> t = expansion;
  vec_sum(t.data(), n);
  vec_sum(t.data(), n);
  vec_sum_err_branch(t.data(), n, r.limb.data(), m);
  tighten(r.limb.data(), m);
  return r;
}

MultiDouble random_md(Rng& rng, int m) {
  std::vector<double> t(m);
  for (int k = 0; k < m; ++k) t[k] = rng.pm1() * std::ldexp(1.0, -53 * k);
  return renormalize(t, m);
}

namespace {

// one counting run over a fixed sample set; max is deterministic because the
// samples are, even though branch counts vary with data
OpCost measure(int m) {
  Rng rng(mix_seed(0x705e5a1cULL, static_cast<std::uint64_t>(m)));
  OpCost worst;
  for (int s = 0; s < 64; ++s) {
    MultiDouble x = random_md(rng, m);
    MultiDouble y = random_md(rng, m);
    CountOps::reset();
    with_m(m, [&](auto M) {
      MultiDouble r(m);
      exp_add<M.value, CountOps>(x.limb.data(), y.limb.data(), r.limb.data());
    });
    worst.add_cost = std::max(worst.add_cost, CountOps::adds + CountOps::muls);
    CountOps::reset();
    with_m(m, [&](auto M) {
      MultiDouble r(m);
      exp_mul<M.value, CountOps>(x.limb.data(), y.limb.data(), r.limb.data());
    });
    worst.mul_cost = std::max(worst.mul_cost, CountOps::adds + CountOps::muls);
  }
  return worst;
}

}  // namespace

OpCost instrumented_cost(int m) {
  check_precision(m);
  static std::map<int, OpCost> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, measure(m)).first;
  return it->second;
}

OpCost reporting_cost(int m) {
  check_precision(m);
  if (m == 1) return {1, 1};
  if (m == 10) return {397, 3089};
  return instrumented_cost(m);
}

}  // namespace pseval
