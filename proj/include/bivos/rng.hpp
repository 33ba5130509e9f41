#pragma once

#include <cstdint>
#include <random>

namespace bivos {

/// Engine used for every random draw in the library. Always seeded explicitly.
using Engine = std::mt19937_64;

/// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from (base, index). Used for per-replicate streams so
/// that a replicate's draws depend only on its index, never on scheduling.
constexpr std::uint64_t mix64(std::uint64_t base, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(base) ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

/// Maps 64 random bits to a double in the open interval (0, 1) using the top
/// 53 bits. Never returns 0 or 1.
constexpr double unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

} // namespace bivos
