#pragma once

#include <cstdint>
#include <random>

namespace asap {

// Uniform integer in [lo, hi] by rejection on raw mt19937_64 output. The
// standard distributions are implementation-defined, so seeded outputs would
// differ between standard libraries.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return lo + static_cast<std::int64_t>(x % span);
}

// Fisher-Yates with uniform_int, stable across platforms.
template <typename It>
void seeded_shuffle(It first, It last, std::mt19937_64& rng) {
    const auto n = last - first;
    for (auto i = n - 1; i > 0; --i) {
        const auto j = uniform_int(rng, 0, i);
        std::swap(first[i], first[j]);
    }
}

}  // namespace asap
