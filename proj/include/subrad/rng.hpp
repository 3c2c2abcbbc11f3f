#pragma once

#include <cstdint>
#include <random>

namespace subrad {

// SplitMix64 step; used as the stream splitter and to scramble user seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed-splitting rule: sub-stream k of a base seed is obtained by two
// SplitMix64 steps on base ^ (golden-ratio * (k+1)).  Every parallel task
// (one per grid point and realization) derives its own generator this way,
// so results do not depend on the thread count.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    splitmix64(s);
    return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64{seed};
}

} // namespace subrad
