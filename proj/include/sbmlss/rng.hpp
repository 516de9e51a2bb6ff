#pragma once

#include <cstdint>
#include <random>

namespace sbmlss {

using Engine = std::mt19937_64;

// Independent engine for replicate `stream` of a run seeded with `seed`.
// Every (seed, stream) pair maps to its own seed_seq state, so replicates can
// be generated in any order or on any thread with identical results.
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5b3d1u};
  return Engine(seq);
}

}  // namespace sbmlss
