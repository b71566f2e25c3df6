#pragma once

#include <cstdint>

namespace oabounds {

// SplitMix64. One instance per sampled path, keyed by (seed, path index),
// so results never depend on how paths are split across threads.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t s) : state(s) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return (next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t path_stream_seed(std::uint64_t seed, std::uint64_t k) {
  // run the index through one scramble round so adjacent paths decorrelate
  SplitMix64 mix(seed ^ (k * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
  return mix.next();
}

}  // namespace oabounds
