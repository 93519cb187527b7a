#include "pseval/gen.hpp"

#include <algorithm>
#include <stdexcept>

namespace pseval {

namespace {

// streams 1..: constant term, monomial coefficients, inputs
enum : std::uint64_t { kStreamA0 = 1, kStreamCoeff = 2, kStreamInput = 3 };

std::vector<std::vector<int>> combinations(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<size_t>(i)] = i + 1;
  while (true) {
    out.push_back(idx);
    int i = r - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == n - (r - 1 - i)) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int j = i + 1; j < r; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

std::vector<std::vector<int>> monomial_shape(const std::string& id) {
  if (id == "p1") return combinations(16, 4);
  if (id == "p3") return combinations(128, 2);
  if (id == "p2") {
    std::vector<std::vector<int>> out;
    for (int k = 0; k < 128; ++k) {
      std::vector<int> w;
      for (int j = 0; j < 64; ++j) w.push_back((k + j) % 128 + 1);
      std::sort(w.begin(), w.end());
      out.push_back(w);
    }
    return out;
  }
  throw std::invalid_argument("unknown benchmark polynomial id: " + id);
}

}  // namespace

bool known_benchmark_id(const std::string& id) {
  return id == "p1" || id == "p2" || id == "p3";
}

Problem gen_benchmark(const std::string& id, int d, int m, Mode mode, std::uint64_t seed) {
  std::vector<std::vector<int>> shape = monomial_shape(id);
  int n = id == "p1" ? 16 : 128;

  Problem prob;
  prob.id = id;
  prob.seed = seed;
  prob.poly.n = n;
  prob.poly.d = d;
  prob.poly.a0 = random_series(mix_seed(seed, kStreamA0 << 32), d, m, mode);
  for (size_t k = 0; k < shape.size(); ++k) {
    Monomial mo;
    mo.indices = shape[k];
    mo.coeff = random_series(mix_seed(seed, (kStreamCoeff << 32) + k), d, m, mode);
    prob.poly.monomials.push_back(std::move(mo));
  }
  for (int i = 0; i < n; ++i)
    prob.z.push_back(random_series(mix_seed(seed, (kStreamInput << 32) + static_cast<std::uint64_t>(i)), d, m, mode));
  return prob;
}

}  // namespace pseval
