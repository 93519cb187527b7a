#pragma once

// Fixed-length floating-point expansions: one real number held as M doubles
// of decreasing magnitude whose exact sum is the represented value.
// All operations are built from error-free transforms, so the only losses
// are the final truncation to M limbs and dropped partial products below
// the last limb.
//
// The P template parameter is a flop-accounting policy; the default NoCount
// compiles to nothing and is used by all production code paths.

#include <bit>
#include <cmath>
#include <cstdint>

namespace pseval {

struct NoCount {
  static void add(long long = 1) {}
  static void mul(long long = 1) {}
};

struct CountOps {
  static inline long long adds = 0;
  static inline long long muls = 0;
  static void add(long long k = 1) { adds += k; }
  static void mul(long long k = 1) { muls += k; }
  static void reset() { adds = 0; muls = 0; }
};

// s = fl(a+b), e = exact error; Knuth's branch-free version, 6 flops
template <class P = NoCount>
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bv = s - a;
  e = (a - (s - bv)) + (b - bv);
  P::add(6);
}

// requires |a| >= |b| or a == 0; 3 flops
template <class P = NoCount>
inline void fast_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
  P::add(3);
}

// p = fl(a*b), e = exact error; needs a correctly fused fma
template <class P = NoCount>
inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
  P::mul(2);
  P::add(1);
}

// In-place error-free pass: x[0] becomes fl(sum of x), the tail holds the
// rounding errors in roughly decreasing magnitude. The array sum is preserved
// exactly, so repeated passes only improve the ordering.
template <class P = NoCount>
inline void vec_sum(double* x, int n) {
  double s = x[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    double e;
    two_sum<P>(x[i], s, s, e);
    x[i + 1] = e;
  }
  x[0] = s;
}

// Compress a vec_sum error cascade into at most m nonzero limbs, zero padded.
// Mass below the m-th emitted limb is dropped (faithful truncation).
template <class P = NoCount>
inline void vec_sum_err_branch(const double* e, int n, double* out, int m) {
  int j = 0;
  double eps = e[0];
  for (int i = 1; i < n; ++i) {
    double r, t;
    fast_two_sum<P>(eps, e[i], r, t);
    if (t != 0.0) {
      out[j++] = r;
      if (j == m) return;
      eps = t;
    } else {
      eps = r;
    }
  }
  out[j++] = eps;
  while (j < m) out[j++] = 0.0;
}

// Re-split adjacent limbs until each pair (w[i], w[i+1]) is a fixed point of
// two_sum, i.e. w[i+1] is the rounding error of w[i] + w[i+1] and therefore
// at most half an ulp of w[i]. Every step preserves the exact sum, zeros
// migrate to the tail, and a leading -0 followed by +0 collapses to +0.
// The half-ulp form is what makes adding a zero expansion, multiplying by
// one, and appending padded zero products all bitwise neutral downstream.
template <class P = NoCount>
inline void tighten(double* w, int m) {
  for (int pass = 0; pass < m; ++pass) {
    bool changed = false;
    for (int i = 0; i + 1 < m; ++i) {
      double s, e;
      two_sum<P>(w[i], w[i + 1], s, e);
      if (std::bit_cast<std::uint64_t>(s) != std::bit_cast<std::uint64_t>(w[i]) ||
          std::bit_cast<std::uint64_t>(e) != std::bit_cast<std::uint64_t>(w[i + 1])) {
        w[i] = s;
        w[i + 1] = e;
        changed = true;
      }
    }
    if (!changed) return;
  }
}

// ulp of |x| for nonzero finite x
inline double ulp_of(double x) {
  int e = std::ilogb(x);
  return std::ldexp(1.0, e - 52 < -1074 ? -1074 : e - 52);
}

// Nonzero limbs strictly decreasing with at most half an ulp of overlap
// headroom (|next| <= ulp(prev)/2), zeros only as a trailing run.
inline bool is_normalized_expansion(const double* limb, int m) {
  int last = -1;
  bool seen_zero = false;
  for (int i = 0; i < m; ++i) {
    if (limb[i] == 0.0) {
      seen_zero = true;
      continue;
    }
    if (seen_zero || !std::isfinite(limb[i])) return false;
    if (last >= 0 && std::fabs(limb[i]) > 0.5 * ulp_of(limb[last])) return false;
    last = i;
  }
  return true;
}

// out = x + y, both M limbs, out M limbs. Merge by magnitude keeps the
// vec_sum input ordered; the whole pipeline is error-free up to the final
// truncation. Safe for out aliasing x or y.
template <int M, class P = NoCount>
inline void exp_add(const double* x, const double* y, double* out) {
  if constexpr (M == 1) {
    out[0] = x[0] + y[0];
    P::add(1);
  } else {
    double t[2 * M];
    int i = 0, j = 0, p = 0;
    while (i < M && j < M)
      t[p++] = std::fabs(x[i]) >= std::fabs(y[j]) ? x[i++] : y[j++];
    while (i < M) t[p++] = x[i++];
    while (j < M) t[p++] = y[j++];
    vec_sum<P>(t, 2 * M);
    vec_sum_err_branch<P>(t, 2 * M, out, M);
    tighten<P>(out, M);
  }
}

template <int M, class P = NoCount>
inline void exp_sub(const double* x, const double* y, double* out) {
  if constexpr (M == 1) {
    out[0] = x[0] - y[0];
    P::add(1);
  } else {
    double ny[M];
    for (int k = 0; k < M; ++k) ny[k] = -y[k];
    exp_add<M, P>(x, ny, out);
  }
}

// out = x * y truncated to M limbs. Partial products on diagonal i+j are
// kept exactly (two_prod) while i+j < M, as plain products on diagonal M,
// and dropped beyond; the term array is grouped diagonal by diagonal with
// each diagonal's rounding errors deferred to the next, so it arrives at
// vec_sum roughly sorted. Safe for out aliasing x or y.
template <int M, class P = NoCount>
inline void exp_mul(const double* x, const double* y, double* out) {
  if constexpr (M == 1) {
    out[0] = x[0] * y[0];
    P::mul(1);
  } else {
    constexpr int NT = M * (M + 1) + (M - 1);
    double t[NT];
    double carry[M], next[M];
    int pos = 0, ncarry = 0;
    for (int k = 0; k <= M; ++k) {
      int nn = 0;
      int ilo = k - (M - 1) > 0 ? k - (M - 1) : 0;
      int ihi = k < M - 1 ? k : M - 1;
      for (int i = ilo; i <= ihi; ++i) {
        if (k < M) {
          double pr, er;
          two_prod<P>(x[i], y[k - i], pr, er);
          t[pos++] = pr;
          next[nn++] = er;
        } else {
          t[pos++] = x[i] * y[k - i];
          P::mul(1);
        }
      }
      for (int c = 0; c < ncarry; ++c) t[pos++] = carry[c];
      for (int c = 0; c < nn; ++c) carry[c] = next[c];
      ncarry = nn;
    }
    vec_sum<P>(t, NT);
    vec_sum<P>(t, NT);
    vec_sum_err_branch<P>(t, NT, out, M);
    tighten<P>(out, M);
  }
}

}  // namespace pseval
