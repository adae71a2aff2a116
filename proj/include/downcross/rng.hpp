#pragma once

#include <bit>
#include <cstdint>

namespace downcross {

// 64-bit counter-based generator (SplitMix64).  One instance per replica;
// replica streams are derived from the master seed with replica_seed(), so
// results depend only on (master_seed, replica index), never on scheduling.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Fair +/-1 step.
  int fair_step() { return (next() >> 63) ? 1 : -1; }

  // Uniform in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Geometric with mean 1 on {0,1,2,...}: P(X=k) = 2^{-(k+1)}.
  // Counts the run of 1-bits from the low end of uniform words.
  std::int64_t geometric_mean1() {
    std::int64_t n = 0;
    for (;;) {
      const int ones = std::countr_one(next());
      n += ones;
      if (ones < 64) return n;
    }
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream seed for replica r of a run keyed by master_seed.
inline std::uint64_t replica_seed(std::uint64_t master_seed, std::uint64_t replica) {
  return mix64(master_seed + 0x9e3779b97f4a7c15ull * (replica + 1));
}

}  // namespace downcross
