#pragma once

// Brute-force reference evaluator: each monomial is expanded by
// left-to-right convolution and differentiated symbolically, with no job
// graph involved. Tests and the verify command compare the engine against
// it; on strictly positive integer instances the agreement is bitwise.

#include <vector>

#include "pseval/jobgraph.hpp"

namespace pseval {

struct Evaluation {
  Series value;
  std::vector<Series> gradient;  // one per variable; zero series when absent
};

// true when the instance is small enough for direct evaluation:
// N * max total degree * (d+1)^2 <= 10^7
bool within_oracle_guard(const Polynomial& p);

// evaluates in the operands' precision; accepts the constant-only
// polynomial (N = 0) that the graph engine rejects; refuses instances
// beyond the guard
Evaluation eval_direct(const Polynomial& p, const std::vector<Series>& z);

}  // namespace pseval
