#pragma once

#include <cstdint>
#include <random>

namespace smog {

using Rng = std::mt19937_64;

/// Stable derivation of per-task substreams from a master seed (splitmix64
/// scramble), so replicate i always sees the same stream regardless of how
/// work is scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace smog
