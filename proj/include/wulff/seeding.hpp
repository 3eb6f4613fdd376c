#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace wulff {

using Rng = std::mt19937_64;

// SplitMix64 finalizer (Steele, Lea, Flood 2014). A bijection on 64-bit words.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Seed of stream `stream` under `master`: mix(master + (stream + 1) * gamma).
/// Injective in `stream` for a fixed master since gamma is odd and the mix
/// is a bijection. These constants are part of the output format.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    return splitmix64_mix(master + (stream + 1) * kGoldenGamma);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Exponential(1) by inversion.
inline double standard_exponential(Rng& rng) {
    return -std::log1p(-uniform01(rng));
}

}  // namespace wulff
