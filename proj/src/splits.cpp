#include <algorithm>
#include <array>

#include "asap/dataset.hpp"
#include "asap/errors.hpp"
#include "asap/rng.hpp"

namespace asap {

DatasetSplit split_dataset(std::span<const MatchHours> matches, std::uint64_t seed) {
    if (matches.size() < 3) throw InfeasibleError("need at least 3 matches to split three ways");
    double total = 0.0;
    for (const auto& m : matches) {
        if (m.hours <= 0) throw Error("match '" + m.id + "' has non-positive hours");
        total += m.hours;
    }
    for (const auto& m : matches) {
        if (m.hours > 0.62 * total) {
            throw InfeasibleError("match '" + m.id + "' holds more than 62% of all hours");
        }
    }

    std::vector<MatchHours> order(matches.begin(), matches.end());
    std::stable_sort(order.begin(), order.end(), [](const MatchHours& a, const MatchHours& b) {
        if (a.hours != b.hours) return a.hours > b.hours;
        return a.id < b.id;
    });
    std::mt19937_64 rng(seed);
    for (auto lo = order.begin(); lo != order.end();) {
        auto hi = std::find_if(lo, order.end(), [&](const MatchHours& m) { return m.hours != lo->hours; });
        seeded_shuffle(lo, hi, rng);
        lo = hi;
    }

    // 60:20:20 in fifths; deficits are compared scaled by 5 so ties stay exact.
    constexpr std::array<double, 3> kWeight{3.0, 1.0, 1.0};
    std::array<double, 3> filled{0.0, 0.0, 0.0};
    DatasetSplit split;
    std::array<std::vector<std::string>*, 3> lists{&split.train, &split.val, &split.test};
    for (const auto& m : order) {
        // Hours still missing from each split's target; the largest deficit wins,
        // ties in train, val, test order.
        const auto deficit = [&](std::size_t k) { return kWeight[k] * total - 5.0 * filled[k]; };
        std::size_t pick = 0;
        for (std::size_t k = 1; k < 3; ++k) {
            if (deficit(k) > deficit(pick)) pick = k;
        }
        filled[pick] += m.hours;
        lists[pick]->push_back(m.id);
    }
    split.hours = {{"train", filled[0]}, {"val", filled[1]}, {"test", filled[2]}};
    return split;
}

}  // namespace asap
