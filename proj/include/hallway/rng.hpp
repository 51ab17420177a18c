#ifndef HALLWAY_RNG_HPP_
#define HALLWAY_RNG_HPP_

#include <cstdint>
#include <random>

#include "hallway/geometry.hpp"

namespace hallway {

// Standard-library distributions are implementation defined, so all draws go
// through these helpers to keep seeded runs byte-reproducible.

/// Uniform double in [0, 1) from the top 53 bits of the engine output.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal via Box-Muller (cosine branch only, two draws per call).
inline double normal01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    // Guard the log against u1 == 0.
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

inline double normal(std::mt19937_64& rng, double mean, double stddev) {
    return mean + stddev * normal01(rng);
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)) % n;
}

/// splitmix64 step, used to combine seeds into independent streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace hallway

#endif  // HALLWAY_RNG_HPP_
