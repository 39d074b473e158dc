#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace wgslr {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for an independent substream identified by `keys` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) noexcept;

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return Rng(derive_seed(master, keys));
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Index drawn from a 3-point distribution by inversion.
inline int draw_category(const double* probs, Rng& rng) {
    const double u = uniform01(rng);
    if (u < probs[0]) return 0;
    if (u < probs[0] + probs[1]) return 1;
    return 2;
}

} // namespace wgslr
