#pragma once

// Arbitrary-precision twin of eval_direct, used to measure the relative
// error of multi-double results. Real mode only; this header pulls in mpfr,
// so only tests and the verification library include it.

#include <vector>

#include "pseval/bigreal.hpp"
#include "pseval/jobgraph.hpp"

namespace pseval {

struct BigEvaluation {
  std::vector<BigReal> value;                  // d+1 coefficients
  std::vector<std::vector<BigReal>> gradient;  // n lists of d+1 coefficients
};

// bits must be at least oracle_bits(m) of the operands so that staging the
// multi-double inputs into big floats is exact
BigEvaluation eval_bigfloat(const Polynomial& p, const std::vector<Series>& z, int bits);

}  // namespace pseval
