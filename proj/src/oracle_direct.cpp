#include "pseval/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace pseval {

namespace {

long long monomial_total_degree(const Monomial& mo) {
  if (mo.exponents.empty()) return static_cast<long long>(mo.indices.size());
  long long q = 0;
  for (int e : mo.exponents) q += e;
  return q;
}

void check_instance(const Polynomial& p, const std::vector<Series>& z) {
  if (p.n < 1) throw std::invalid_argument("polynomial needs at least one variable");
  if (p.a0.degree != p.d) throw std::invalid_argument("constant term degree mismatch");
  if (!p.monomials.empty()) check_polynomial(p);
  if (static_cast<int>(z.size()) != p.n)
    throw std::invalid_argument("input series count does not match the variable count");
  for (const Series& zi : z) {
    if (zi.degree != p.d) throw std::invalid_argument("input series degree mismatch");
    if (zi.m != p.a0.m) throw std::invalid_argument("input series precision mismatch");
    if (zi.mode != p.a0.mode) throw std::invalid_argument("input series mode mismatch");
  }
}

}  // namespace

bool within_oracle_guard(const Polynomial& p) {
  const long long N = static_cast<long long>(p.monomials.size());
  long long worst = 1;
  for (const Monomial& mo : p.monomials)
    worst = std::max(worst, monomial_total_degree(mo));
  const long long d1 = p.d + 1;
  return N * worst * d1 * d1 <= 10'000'000LL;
}

Evaluation eval_direct(const Polynomial& p, const std::vector<Series>& z) {
  check_instance(p, z);
  if (!within_oracle_guard(p))
    throw std::invalid_argument("instance exceeds the direct-evaluation size guard");

  Evaluation out;
  out.value = p.a0;
  out.gradient.assign(static_cast<size_t>(p.n), make_series(p.d, p.a0.m, p.a0.mode));
  std::vector<bool> touched(static_cast<size_t>(p.n), false);

  for (const Monomial& mo : p.monomials) {
    const size_t nk = mo.indices.size();
    auto exp_of = [&](size_t j) { return mo.exponents.empty() ? 1 : mo.exponents[j]; };

    // value term: a_k * z_{i1}^{e1} * z_{i2}^{e2} * ... left to right
    Series v = mo.coeff;
    for (size_t j = 0; j < nk; ++j)
      for (int q = 0; q < exp_of(j); ++q)
        v = conv(v, z[static_cast<size_t>(mo.indices[j] - 1)]);
    out.value = series_add(out.value, v);

    // derivative terms: the same chain with one exponent reduced, then the
    // chain-rule factor applied to the finished product
    for (size_t j = 0; j < nk; ++j) {
      Series t = mo.coeff;
      for (size_t l = 0; l < nk; ++l) {
        const int reps = exp_of(l) - (l == j ? 1 : 0);
        for (int q = 0; q < reps; ++q)
          t = conv(t, z[static_cast<size_t>(mo.indices[l] - 1)]);
      }
      if (exp_of(j) != 1) t = series_scale_int(t, exp_of(j));
      const size_t var = static_cast<size_t>(mo.indices[j] - 1);
      out.gradient[var] = touched[var] ? series_add(out.gradient[var], t) : std::move(t);
      touched[var] = true;
    }
  }
  return out;
}

}  // namespace pseval
