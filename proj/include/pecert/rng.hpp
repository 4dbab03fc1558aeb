#pragma once

#include <cstdint>

namespace pecert {

// splitmix64: the algorithm identifier recorded in reports. Counter-based,
// so streams are reproducible from the seed alone and cheap to fork.
inline constexpr const char* kRngAlgorithm = "splitmix64";

struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform double in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  uint8_t bit() { return static_cast<uint8_t>(next() >> 63); }

  // unbiased integer in [0, n) by rejection
  uint64_t below(uint64_t n) {
    uint64_t lim = ~uint64_t{0} - ~uint64_t{0} % n;
    uint64_t v;
    do {
      v = next();
    } while (v >= lim);
    return v % n;
  }
};

}  // namespace pecert
