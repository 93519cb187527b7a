#pragma once

// The three benchmark polynomials:
//   p1: all C(16,4) = 1820 products of exactly 4 of 16 variables
//   p2: 128 variables, 128 monomials; monomial k multiplies the 64 cyclically
//       consecutive variables starting at k, so each variable appears in
//       exactly 64 monomials
//   p3: all C(128,2) = 8128 products of pairs of 128 variables
// Coefficients and evaluation-point series are deterministic in the seed.

#include <cstdint>
#include <string>
#include <vector>

#include "pseval/jobgraph.hpp"

namespace pseval {

struct Problem {
  std::string id;  // p1|p2|p3 or "file"
  std::uint64_t seed = 0;
  Polynomial poly;
  std::vector<Series> z;  // one input series per variable
};

bool known_benchmark_id(const std::string& id);

Problem gen_benchmark(const std::string& id, int d, int m, Mode mode, std::uint64_t seed);

}  // namespace pseval
