#pragma once

#include <cstdint>
#include <random>

namespace sonc {

/// Uniform integer in [0, bound) by rejection. std::uniform_int_distribution
/// is implementation-defined, so seeded runs would not reproduce across
/// standard libraries; this does.
inline std::uint64_t rng_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double rng_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace sonc
