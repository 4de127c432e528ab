#pragma once

#include <cstdint>
#include <random>

namespace varjump {

// The single PRNG used everywhere randomness is needed. mt19937_64 has a
// fully specified algorithm, so a seed reproduces the same stream on every
// standard library implementation.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

// Uniform integer in [0, bound) drawn via rejection from raw 64-bit words.
// std::uniform_int_distribution is implementation-defined, which would break
// the cross-platform determinism contract, so we roll the mapping ourselves.
inline std::uint64_t rng_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return x % bound;
}

// Bernoulli(p) trial with a fixed 2^-53 resolution, again for cross-platform
// reproducibility.
inline bool rng_chance(Rng& rng, double p) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u < p;
}

}  // namespace varjump
