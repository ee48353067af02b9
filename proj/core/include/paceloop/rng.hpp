#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace paceloop {

// Draw helpers on top of std::mt19937. The standard <random> distributions
// are implementation-defined, which would make event logs differ between
// standard libraries; everything here is fully specified so a seed pins the
// byte-exact output everywhere.

inline double uniform01(std::mt19937& rng) {
    // 53 random bits -> [0, 1)
    const std::uint64_t hi = rng() >> 5;  // 27 bits
    const std::uint64_t lo = rng() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * (1.0 / 9007199254740992.0);
}

inline double uniform_range(std::mt19937& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Unbiased integer in [0, n), n >= 1.
inline std::uint32_t uniform_index(std::mt19937& rng, std::uint32_t n) {
    const std::uint32_t limit = UINT32_MAX - UINT32_MAX % n;
    std::uint32_t value = rng();
    while (value >= limit) {
        value = rng();
    }
    return value % n;
}

// Box-Muller; one value per call, the pair's second half is discarded so the
// draw count per call site stays fixed.
inline double normal(std::mt19937& rng, double mean, double sd) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * radius * std::cos(6.283185307179586 * u2);
}

}  // namespace paceloop
