#include "pseval/pseries.hpp"

#include <bit>
#include <stdexcept>

namespace pseval {

Series make_series(int degree, int m, Mode mode) {
  if (degree < 0) throw std::invalid_argument("negative truncation degree");
  check_precision(m);
  Series s;
  s.degree = degree;
  s.m = m;
  s.mode = mode;
  s.c.assign(static_cast<size_t>(degree) + 1, Coeff{MultiDouble(m), MultiDouble(m)});
  return s;
}

Series one_series(int degree, int m, Mode mode) {
  Series s = make_series(degree, m, mode);
  s.c[0].re.limb[0] = 1.0;
  return s;
}

Series const_series(double v, int degree, int m, Mode mode) {
  Series s = make_series(degree, m, mode);
  s.c[0].re.limb[0] = v;
  return s;
}

void check_compatible(const Series& x, const Series& y) {
  if (x.degree != y.degree) throw std::invalid_argument("series degree mismatch");
  if (x.m != y.m) throw std::invalid_argument("series precision mismatch");
  if (x.mode != y.mode) throw std::invalid_argument("series mode mismatch");
}

Series conv(const Series& x, const Series& y) {
  check_compatible(x, y);
  Series z = make_series(x.degree, x.m, x.mode);
  const bool cx = x.mode == Mode::cplx;
  for (int k = 0; k <= x.degree; ++k) {
    Coeff acc{MultiDouble(x.m), MultiDouble(x.m)};
    for (int i = 0; i <= k; ++i) {
      const Coeff& a = x.c[static_cast<size_t>(i)];
      const Coeff& b = y.c[static_cast<size_t>(k - i)];
      if (!cx) {
        MultiDouble p = md_mul(a.re, b.re);
        acc.re = i == 0 ? p : md_add(acc.re, p);
      } else {
        MultiDouble pre = md_sub(md_mul(a.re, b.re), md_mul(a.im, b.im));
        MultiDouble pim = md_add(md_mul(a.re, b.im), md_mul(a.im, b.re));
        if (i == 0) {
          acc.re = pre;
          acc.im = pim;
        } else {
          acc.re = md_add(acc.re, pre);
          acc.im = md_add(acc.im, pim);
        }
      }
    }
    z.c[static_cast<size_t>(k)] = acc;
  }
  return z;
}

Series series_add(const Series& x, const Series& y) {
  check_compatible(x, y);
  Series z = make_series(x.degree, x.m, x.mode);
  for (int k = 0; k <= x.degree; ++k) {
    z.c[k].re = md_add(x.c[k].re, y.c[k].re);
    if (x.mode == Mode::cplx) z.c[k].im = md_add(x.c[k].im, y.c[k].im);
  }
  return z;
}

Series series_neg(const Series& x) {
  Series z = x;
  for (auto& co : z.c) {
    co.re = md_neg(co.re);
    if (x.mode == Mode::cplx) co.im = md_neg(co.im);
  }
  return z;
}

Series series_scale_int(const Series& x, long cval) {
  MultiDouble c = md_from_double(static_cast<double>(cval), x.m);
  Series z = make_series(x.degree, x.m, x.mode);
  for (int k = 0; k <= x.degree; ++k) {
    z.c[k].re = md_mul(x.c[k].re, c);
    if (x.mode == Mode::cplx) z.c[k].im = md_mul(x.c[k].im, c);
  }
  return z;
}

Series random_series(std::uint64_t seed, int degree, int m, Mode mode) {
  Series s = make_series(degree, m, mode);
  Rng rng(seed);
  for (auto& co : s.c) {
    co.re = random_md(rng, m);
    if (mode == Mode::cplx) co.im = random_md(rng, m);
  }
  return s;
}

bool series_bitwise_equal(const Series& x, const Series& y) {
  if (x.degree != y.degree || x.m != y.m || x.mode != y.mode) return false;
  auto same = [&](const MultiDouble& a, const MultiDouble& b) {
    for (int i = 0; i < a.m; ++i)
      if (std::bit_cast<std::uint64_t>(a.limb[i]) != std::bit_cast<std::uint64_t>(b.limb[i]))
        return false;
    return true;
  };
  for (size_t k = 0; k < x.c.size(); ++k)
    if (!same(x.c[k].re, y.c[k].re) || !same(x.c[k].im, y.c[k].im)) return false;
  return true;
}

}  // namespace pseval
