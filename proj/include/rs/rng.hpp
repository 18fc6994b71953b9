#pragma once

#include <cstdint>
#include <random>

namespace rs {

/// All stochastic operations take an explicit seed. Batch streams are derived
/// from the master seed by splitmix64 mixing of the stream index, so results
/// are reproducible for a fixed seed regardless of batching.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix_seed(seed, stream));
}

}  // namespace rs
