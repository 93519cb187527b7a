#pragma once

// Runtime-precision wrapper over the fixed-size expansion kernels.
// A MultiDouble carries its own precision level m; arithmetic dispatches to
// the exp_* templates so that every consumer (series ops, executor kernels,
// tests) shares one bitwise-identical code path per m.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pseval/expansion.hpp"
#include "pseval/rng.hpp"

namespace pseval {

inline constexpr int kMaxLimbs = 10;
inline constexpr int kPrecisionLevels[] = {1, 2, 3, 4, 5, 8, 10};

inline bool valid_precision(int m) {
  for (int p : kPrecisionLevels)
    if (p == m) return true;
  return false;
}

inline void check_precision(int m) {
  if (!valid_precision(m)) throw std::invalid_argument("unsupported precision level");
}

// dispatch a callable templated on the limb count
template <class F>
decltype(auto) with_m(int m, F&& f) {
  switch (m) {
    case 1: return f(std::integral_constant<int, 1>{});
    case 2: return f(std::integral_constant<int, 2>{});
    case 3: return f(std::integral_constant<int, 3>{});
    case 4: return f(std::integral_constant<int, 4>{});
    case 5: return f(std::integral_constant<int, 5>{});
    case 8: return f(std::integral_constant<int, 8>{});
    case 10: return f(std::integral_constant<int, 10>{});
    default: throw std::invalid_argument("unsupported precision level");
  }
}

struct MultiDouble {
  int m = 1;
  std::array<double, kMaxLimbs> limb{};  // most significant first; limbs >= m stay zero

  MultiDouble() = default;
  explicit MultiDouble(int m_) : m(m_) { check_precision(m_); }

  bool operator==(const MultiDouble&) const = default;
};

inline MultiDouble md_from_double(double v, int m) {
  MultiDouble r(m);
  r.limb[0] = v;
  return r;
}

inline MultiDouble md_zero(int m) { return MultiDouble(m); }

inline double md_to_double(const MultiDouble& x) {
  double s = 0.0;
  for (int i = x.m - 1; i >= 0; --i) s += x.limb[i];
  return s;
}

inline void check_same_m(const MultiDouble& x, const MultiDouble& y) {
  if (x.m != y.m) throw std::invalid_argument("mixed precision operands");
}

inline MultiDouble md_add(const MultiDouble& x, const MultiDouble& y) {
  check_same_m(x, y);
  MultiDouble r(x.m);
  with_m(x.m, [&](auto M) { exp_add<M.value>(x.limb.data(), y.limb.data(), r.limb.data()); });
  return r;
}

inline MultiDouble md_sub(const MultiDouble& x, const MultiDouble& y) {
  check_same_m(x, y);
  MultiDouble r(x.m);
  with_m(x.m, [&](auto M) { exp_sub<M.value>(x.limb.data(), y.limb.data(), r.limb.data()); });
  return r;
}

inline MultiDouble md_mul(const MultiDouble& x, const MultiDouble& y) {
  check_same_m(x, y);
  MultiDouble r(x.m);
  with_m(x.m, [&](auto M) { exp_mul<M.value>(x.limb.data(), y.limb.data(), r.limb.data()); });
  return r;
}

inline MultiDouble md_neg(const MultiDouble& x) {
  MultiDouble r = x;
  for (int i = 0; i < x.m; ++i) r.limb[i] = -x.limb[i];
  return r;
}

inline bool md_is_normalized(const MultiDouble& x) {
  return is_normalized_expansion(x.limb.data(), x.m);
}

// Faithful m-limb renormalization of an arbitrary finite expansion.
// Already-normalized m-limb input is returned unchanged, which makes the
// operation idempotent.
MultiDouble renormalize(const std::vector<double>& expansion, int m);

// Full-precision pseudo-random value with leading limb uniform in [-1,1);
// lower limbs are filled so every bit of the expansion is exercised.
MultiDouble random_md(Rng& rng, int m);

// relative-error envelope asserted for md_add / md_mul against a big-float
// reference; loose upper bound over certified expansion arithmetic errors
inline double md_rel_tolerance(int m) { return std::ldexp(1.0, 16 - 52 * m); }

struct OpCost {
  long long add_cost = 0;
  long long mul_cost = 0;
};

// double operations executed by one md_add / md_mul at level m, measured by
// the counting build over a fixed deterministic sample set (max over samples)
OpCost instrumented_cost(int m);

// cost table used for reported operation totals: the published deca-double
// constants for m=10, plain binary64 for m=1, instrumented measurements
// otherwise (both tables remain queryable)
OpCost reporting_cost(int m);

}  // namespace pseval
