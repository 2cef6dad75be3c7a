#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gal {

// mt19937_64 output is pinned by the standard, so seeds reproduce across
// platforms. The std distributions are not, so the draws below are
// hand-rolled on top of the raw engine.
using Rng = std::mt19937_64;

// integer in [0, n), multiply-shift mapping of one 64-bit draw
inline std::uint64_t bounded(Rng& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

// double in [0, 1) with 53 random bits
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// standard normal via the polar (Marsaglia) method
inline double gaussian(Rng& rng) {
    for (;;) {
        const double u = 2.0 * uniform01(rng) - 1.0;
        const double v = 2.0 * uniform01(rng) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

}  // namespace gal
