#pragma once

// Shared random-instance builders for the cross-check tests. The integer
// builders draw strictly positive values, so no cancellation occurs anywhere:
// every intermediate stays a moderate exact integer, signed zeros never
// appear, and engine-versus-oracle agreement becomes a bitwise statement.

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "pseval/jobgraph.hpp"
#include "pseval/rng.hpp"

namespace testutil {

using namespace pseval;

struct Instance {
  Polynomial poly;
  std::vector<Series> z;
};

inline Series int_series(Rng& rng, int degree, int m, Mode mode, long lo, long hi) {
  Series s = make_series(degree, m, mode);
  for (auto& co : s.c) {
    co.re.limb[0] = static_cast<double>(rng.range(lo, hi));
    if (mode == Mode::cplx) co.im.limb[0] = static_cast<double>(rng.range(lo, hi));
  }
  return s;
}

inline Series md_series(Rng& rng, int degree, int m, Mode mode) {
  Series s = make_series(degree, m, mode);
  for (auto& co : s.c) {
    co.re = random_md(rng, m);
    if (mode == Mode::cplx) co.im = random_md(rng, m);
  }
  return s;
}

inline std::vector<int> pick_indices(Rng& rng, int n, int nk) {
  std::set<int> pick;
  while (static_cast<int>(pick.size()) < nk)
    pick.insert(static_cast<int>(rng.range(1, n)));
  return {pick.begin(), pick.end()};
}

// n <= 6, N <= 10, d <= 5, coefficients in [1,9], inputs in [1,3],
// exponents <= 2: the largest possible slot value stays far below 2^53
inline Instance random_int_instance(Rng& rng, bool with_exponents) {
  const int n = static_cast<int>(rng.range(1, 6));
  const int N = static_cast<int>(rng.range(1, 10));
  const int d = static_cast<int>(rng.range(0, 5));
  Instance inst;
  inst.poly.n = n;
  inst.poly.d = d;
  inst.poly.a0 = int_series(rng, d, 1, Mode::real, 1, 9);
  for (int k = 0; k < N; ++k) {
    Monomial mo;
    const int nk = static_cast<int>(rng.range(1, std::min(n, 4)));
    mo.indices = pick_indices(rng, n, nk);
    if (with_exponents && rng.range(0, 1) == 1)
      for (int j = 0; j < nk; ++j)
        mo.exponents.push_back(static_cast<int>(rng.range(1, 2)));
    mo.coeff = int_series(rng, d, 1, Mode::real, 1, 9);
    inst.poly.monomials.push_back(std::move(mo));
  }
  for (int i = 0; i < n; ++i) inst.z.push_back(int_series(rng, d, 1, Mode::real, 1, 3));
  return inst;
}

// full-precision coefficients at level m
inline Instance random_md_instance(Rng& rng, int m, Mode mode, int nmax = 6, int Nmax = 8,
                                   int dmax = 6, bool with_exponents = false, int dmin = 1) {
  const int n = static_cast<int>(rng.range(1, nmax));
  const int N = static_cast<int>(rng.range(1, Nmax));
  const int d = static_cast<int>(rng.range(dmin, dmax));
  Instance inst;
  inst.poly.n = n;
  inst.poly.d = d;
  inst.poly.a0 = md_series(rng, d, m, mode);
  for (int k = 0; k < N; ++k) {
    Monomial mo;
    const int nk = static_cast<int>(rng.range(1, std::min(n, 4)));
    mo.indices = pick_indices(rng, n, nk);
    if (with_exponents && rng.range(0, 1) == 1)
      for (int j = 0; j < nk; ++j)
        mo.exponents.push_back(static_cast<int>(rng.range(1, 2)));
    mo.coeff = md_series(rng, d, m, mode);
    inst.poly.monomials.push_back(std::move(mo));
  }
  for (int i = 0; i < n; ++i) inst.z.push_back(md_series(rng, d, m, mode));
  return inst;
}

}  // namespace testutil
