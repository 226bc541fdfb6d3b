#pragma once

#include <cstdint>
#include <random>

namespace salad {

// Named RNG streams. Probing decisions and channel outcome draws must never
// share a stream, so that two adapters replayed on the same seed observe the
// same channel realization.
enum class RngStream : std::uint64_t {
    channel = 0x6368616e6e656cULL,
    probe = 0x70726f6265ULL,
    noise = 0x6e6f697365ULL,
};

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream) {
    return std::mt19937_64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream)));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, RngStream stream, std::uint64_t run_index) {
    return std::mt19937_64(mix64(mix64(seed) ^ static_cast<std::uint64_t>(stream)) + mix64(run_index));
}

/// Uniform draw in [0, 1) with 53-bit resolution. Consumes exactly one engine
/// step; identical across platforms since mt19937_64 output is standardized.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

}  // namespace salad
