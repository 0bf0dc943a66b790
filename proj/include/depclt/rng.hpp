#pragma once

// Reproducible per-replicate random streams. Each replicate gets its own
// Mersenne Twister keyed by a splitmix64 hash of (seed, replicate), so results
// do not depend on how replicates are spread over threads.

#include <cstdint>
#include <random>

namespace depclt {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t replicate) {
    return splitmix64(splitmix64(seed) ^ splitmix64(~replicate));
}

inline Rng make_stream(std::uint64_t seed, std::uint64_t replicate) {
    return Rng(stream_seed(seed, replicate));
}

}  // namespace depclt
