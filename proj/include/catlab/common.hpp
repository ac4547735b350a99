// Shared numeric conventions: tolerances, seeded RNG streams, integer
// ceilings of floating-point expressions.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace catlab {

// Relative cutoff (w.r.t. the largest eigenvalue) separating genuine
// support from round-off when deciding ranks.
inline constexpr double kSupportTol = 1e-10;

// Hermiticity / trace-preservation checks.
inline constexpr double kHermTol = 1e-9;

// How negative an "eigenvalue of a PSD matrix" may be before we treat
// the input as invalid rather than clamping.
inline constexpr double kPsdTol = 1e-9;

inline constexpr const char* kVersion = "0.1.0";

// Ceiling that snaps values sitting within a relative 1e-9 of an
// integer before rounding up. pow(2, 10) style expressions otherwise
// land on 1024.0000000003 and get ceiled to 1025.
inline std::int64_t ceil_snapped(double x) {
    if (!std::isfinite(x)) throw std::overflow_error("ceil_snapped: non-finite value");
    if (x >= 9.0e18) throw std::overflow_error("ceil_snapped: value exceeds 64-bit range");
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::ceil(x));
}

namespace detail {
// SplitMix64 step, used to decorrelate per-task seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Independent generator for task `index` of a sweep. Streams depend only
// on (seed, index), never on scheduling order.
inline std::mt19937_64 rng_stream(std::uint64_t seed, std::uint64_t index = 0) {
    std::uint64_t s = seed + 0x632be59bd9b4e019ULL * (index + 1);
    const std::uint64_t a = detail::splitmix64(s);
    const std::uint64_t b = detail::splitmix64(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace catlab
