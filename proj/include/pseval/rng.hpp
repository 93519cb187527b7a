#pragma once

#include <cstdint>
#include <random>

namespace pseval {

// Deterministic uniform doubles. The bit mapping is explicit because
// std::uniform_real_distribution is implementation-defined and would break
// cross-build reproducibility of generated problems.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  std::uint64_t u64() { return gen(); }

  // [0,1)
  double unit() { return static_cast<double>(gen() >> 11) * 0x1p-53; }

  // [-1,1)
  double pm1() { return static_cast<double>(gen() >> 11) * 0x1p-52 - 1.0; }

  // inclusive; modulo bias is irrelevant here, determinism is not
  long range(long lo, long hi) {
    return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

// splitmix64: decorrelates seeds derived from (base, stream) pairs
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace pseval
