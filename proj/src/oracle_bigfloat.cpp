#include "pseval/oracle_bigfloat.hpp"

#include <stdexcept>
#include <utility>

namespace pseval {

namespace {

using BigSeries = std::vector<BigReal>;

BigSeries big_zero(int degree, int bits) {
  return BigSeries(static_cast<size_t>(degree) + 1, BigReal(bits));
}

BigSeries to_big(const Series& s, int bits) {
  BigSeries out = big_zero(s.degree, bits);
  for (size_t k = 0; k < s.c.size(); ++k) out[k].set_md(s.c[k].re);
  return out;
}

BigSeries big_conv(const BigSeries& x, const BigSeries& y, int bits) {
  BigSeries z = big_zero(static_cast<int>(x.size()) - 1, bits);
  BigReal prod(bits);
  for (size_t k = 0; k < x.size(); ++k) {
    for (size_t i = 0; i <= k; ++i) {
      prod.mul(x[i], y[k - i]);
      z[k].add(z[k], prod);
    }
  }
  return z;
}

void big_add_into(BigSeries& dst, const BigSeries& src) {
  for (size_t k = 0; k < dst.size(); ++k) dst[k].add(dst[k], src[k]);
}

void big_scale(BigSeries& s, long c) {
  for (BigReal& v : s) v.mul_long(v, c);
}

}  // namespace

BigEvaluation eval_bigfloat(const Polynomial& p, const std::vector<Series>& z, int bits) {
  if (p.n < 1) throw std::invalid_argument("polynomial needs at least one variable");
  if (p.a0.degree != p.d) throw std::invalid_argument("constant term degree mismatch");
  if (!p.monomials.empty()) check_polynomial(p);
  if (p.a0.mode != Mode::real) throw std::invalid_argument("big-float reference is real mode only");
  if (bits < oracle_bits(p.a0.m))
    throw std::invalid_argument("bit width too small for exact staging of the operands");
  if (static_cast<int>(z.size()) != p.n)
    throw std::invalid_argument("input series count does not match the variable count");
  for (const Series& zi : z) {
    if (zi.degree != p.d || zi.m != p.a0.m || zi.mode != Mode::real)
      throw std::invalid_argument("input series shape mismatch");
  }

  std::vector<BigSeries> bz;
  bz.reserve(z.size());
  for (const Series& zi : z) bz.push_back(to_big(zi, bits));

  BigEvaluation out;
  out.value = to_big(p.a0, bits);
  out.gradient.assign(static_cast<size_t>(p.n), big_zero(p.d, bits));
  std::vector<bool> touched(static_cast<size_t>(p.n), false);

  for (const Monomial& mo : p.monomials) {
    const size_t nk = mo.indices.size();
    auto exp_of = [&](size_t j) { return mo.exponents.empty() ? 1 : mo.exponents[j]; };

    BigSeries v = to_big(mo.coeff, bits);
    for (size_t j = 0; j < nk; ++j)
      for (int q = 0; q < exp_of(j); ++q)
        v = big_conv(v, bz[static_cast<size_t>(mo.indices[j] - 1)], bits);
    big_add_into(out.value, v);

    for (size_t j = 0; j < nk; ++j) {
      BigSeries t = to_big(mo.coeff, bits);
      for (size_t l = 0; l < nk; ++l) {
        const int reps = exp_of(l) - (l == j ? 1 : 0);
        for (int q = 0; q < reps; ++q)
          t = big_conv(t, bz[static_cast<size_t>(mo.indices[l] - 1)], bits);
      }
      if (exp_of(j) != 1) big_scale(t, exp_of(j));
      const size_t var = static_cast<size_t>(mo.indices[j] - 1);
      if (touched[var]) {
        big_add_into(out.gradient[var], t);
      } else {
        out.gradient[var] = std::move(t);
        touched[var] = true;
      }
    }
  }
  return out;
}

}  // namespace pseval
