#pragma once

#include <cstdint>
#include <random>

namespace emai {

using Rng = std::mt19937_64;

// Named seed streams. Keeping them distinct makes matched-seed comparisons
// independent of how many random draws each intervention consumes.
enum class Stream : std::uint64_t {
  kEnvReset = 1,
  kExploration = 2,
  kMasking = 3,
  kBaseline = 4,
  kExplainer = 5,
  kRandomSelection = 6,
  kAttackNoise = 7,
  kOracle = 8,
  kReplay = 9,
  kInit = 10,
  kHarvest = 11,
  kPatch = 12,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream stream,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(base ^ splitmix64(static_cast<std::uint64_t>(stream))) + index);
}

inline Rng make_rng(std::uint64_t base, Stream stream, std::uint64_t index) {
  return Rng(derive_seed(base, stream, index));
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_index(Rng& rng, int count) {
  return std::uniform_int_distribution<int>(0, count - 1)(rng);
}

}  // namespace emai
