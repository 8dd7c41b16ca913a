#pragma once

#include <cmath>
#include <cstdint>

namespace lcsde {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so any path/step/component can be regenerated
// in isolation regardless of scheduling.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ stream);
    h = splitmix64(h ^ ctr_hi);
    h = splitmix64(h ^ ctr_lo);
    return h;
}

// Uniform in (0,1), never exactly 0 or 1.
inline double uniform01(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
    return uniform01(key(seed, stream, ctr_hi, ctr_lo));
}

// Standard normal via Box-Muller on two counter draws.
inline double normal(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t ctr_hi, std::uint64_t ctr_lo) {
    double u1 = uniform01(key(seed, stream, ctr_hi, 2 * ctr_lo));
    double u2 = uniform01(key(seed, stream, ctr_hi, 2 * ctr_lo + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace rng
} // namespace lcsde
