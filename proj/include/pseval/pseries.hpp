#pragma once

// Truncated power series with real or complex multi-double coefficients and
// the two primitive operations the whole engine is built from: coefficient
// convolution (series product) and coefficient-wise addition.

#include <cstdint>
#include <vector>

#include "pseval/multidouble.hpp"

namespace pseval {

enum class Mode { real, cplx };

struct Coeff {
  MultiDouble re;
  MultiDouble im;  // stays all-zero in real mode
};

struct Series {
  int degree = 0;
  int m = 1;
  Mode mode = Mode::real;
  std::vector<Coeff> c;  // exactly degree+1 entries, c[k] multiplies t^k
};

Series make_series(int degree, int m, Mode mode);        // all-zero
Series one_series(int degree, int m, Mode mode);         // 1, 0, ..., 0
Series const_series(double v, int degree, int m, Mode mode);

// z_k = sum_{i=0..k} x_i * y_{k-i}, accumulated in ascending i. This order is
// canonical: the executor kernels reproduce it term for term, so results are
// bitwise comparable across every execution path.
Series conv(const Series& x, const Series& y);

// z_k = x_k + y_k
Series series_add(const Series& x, const Series& y);

Series series_neg(const Series& x);

// every coefficient times the exactly representable integer c
Series series_scale_int(const Series& x, long cval);

// deterministic coefficients: leading limbs uniform in [-1,1), lower limbs
// filled to full precision; same arguments, same bits
Series random_series(std::uint64_t seed, int degree, int m, Mode mode);

bool series_bitwise_equal(const Series& x, const Series& y);

// checks degree, precision and mode agreement; throws std::invalid_argument
void check_compatible(const Series& x, const Series& y);

}  // namespace pseval
