#pragma once

#include <cstdint>
#include <random>

namespace wst {

// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the standard,
// but the distribution classes are not, so we map raw bits to doubles ourselves
// to keep reports bit-identical across platforms.
class Rng {
public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform integer in [0, n)
  uint64_t next_below(uint64_t n) {
    // rejection sampling keeps the mapping exact and reproducible
    uint64_t lim = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = gen_();
    } while (x >= lim);
    return x % n;
  }

  // uniform in [lo, hi)
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  bool next_bool() { return (gen_() & 1u) != 0; }

private:
  std::mt19937_64 gen_;
};

}  // namespace wst
