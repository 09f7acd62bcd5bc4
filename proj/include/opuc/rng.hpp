// Counter-based deterministic random phases.
//
// phase(seed, n) is a pure function of (seed, n): no generator state, so
// coefficients can be materialized in any order and from any number of
// workers with bit-identical results.

#pragma once

#include <cstdint>

namespace opuc {

// splitmix64 finalizer; full-period bijective mixer on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in [0, 1), keyed by (seed, counter).
inline double uniform_unit(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t h = mix64(mix64(seed) ^ mix64(counter + 0x632BE59BD9B4E019ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace opuc
