#pragma once

#include <cstdint>
#include <random>

namespace crowdtex::rng {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based hash of up to four keys. Pure: same keys, same bits.
constexpr std::uint64_t hash(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0,
                             std::uint64_t d = 0) noexcept {
    std::uint64_t h = mix64(a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return mix64(h ^ d);
}

/// Maps 64 random bits to [0, 1) using the top 53 bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

using Engine = std::mt19937_64;

/// Unbiased draw in [0, n). Written out because std distributions are not
/// specified bit-for-bit across standard libraries.
inline std::uint64_t uniform_index(Engine& engine, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    return draw % n;
}

template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, Engine& engine) {
    const auto count = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = count; i > 1; --i) {
        const auto j = uniform_index(engine, i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

}  // namespace crowdtex::rng
