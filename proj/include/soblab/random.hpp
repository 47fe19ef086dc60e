#pragma once

#include <cstdint>
#include <random>

// Deterministic seeding: a single 64-bit root seed; independent streams are
// derived with splitmix64 so that (seed, stream index) fully determines every
// draw regardless of scheduling.

namespace soblab {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Engine for sub-stream `index` of root `seed`.
inline std::mt19937_64 seeded_engine(uint64_t seed, uint64_t index) {
    uint64_t s = seed ^ (0xd1342543de82ef95ULL * (index + 1));
    std::seed_seq seq{static_cast<uint32_t>(splitmix64(s)),
                      static_cast<uint32_t>(splitmix64(s)),
                      static_cast<uint32_t>(splitmix64(s)),
                      static_cast<uint32_t>(splitmix64(s))};
    return std::mt19937_64(seq);
}

}  // namespace soblab
