#pragma once

// Arbitrary-precision reals used only as a verification reference.
// Nothing in the engine links this; tests and the big-float evaluator do.

#include <mpfr.h>

#include <string>

#include "pseval/multidouble.hpp"

namespace pseval {

class BigReal {
 public:
  explicit BigReal(int bits = 256) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  BigReal(const BigReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigReal(BigReal&& o) noexcept { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
  BigReal& operator=(const BigReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigReal& operator=(BigReal&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  int bits() const { return static_cast<int>(mpfr_get_prec(v_)); }

  void set_d(double x) { mpfr_set_d(v_, x, MPFR_RNDN); }
  // exact when bits comfortably exceed 53 + limb span, which callers ensure
  void set_md(const MultiDouble& x) {
    mpfr_set_d(v_, x.limb[0], MPFR_RNDN);
    for (int i = 1; i < x.m; ++i) mpfr_add_d(v_, v_, x.limb[i], MPFR_RNDN);
  }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  void add(const BigReal& a, const BigReal& b) { mpfr_add(v_, a.v_, b.v_, MPFR_RNDN); }
  void sub(const BigReal& a, const BigReal& b) { mpfr_sub(v_, a.v_, b.v_, MPFR_RNDN); }
  void mul(const BigReal& a, const BigReal& b) { mpfr_mul(v_, a.v_, b.v_, MPFR_RNDN); }
  void div(const BigReal& a, const BigReal& b) { mpfr_div(v_, a.v_, b.v_, MPFR_RNDN); }
  void mul_long(const BigReal& a, long c) { mpfr_mul_si(v_, a.v_, c, MPFR_RNDN); }
  void abs_inplace() { mpfr_abs(v_, v_, MPFR_RNDN); }

  int cmpabs(const BigReal& o) const { return mpfr_cmpabs(v_, o.v_); }

  std::string str(int digits = 30) const;

 private:
  mpfr_t v_;
};

// bit width that makes every m-limb expansion exactly representable with room
inline int oracle_bits(int m) { return 64 * m + 64; }

// |(x - ref)/ref| evaluated in big-float; |x - ref| when ref == 0
double rel_error_vs(const MultiDouble& x, const BigReal& ref);

}  // namespace pseval
