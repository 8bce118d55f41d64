#pragma once

#include <array>
#include <string_view>

namespace asap::test {

// Binary queries as printed in the published balanced-query table.
inline constexpr std::array<std::string_view, 32> kTableQueries = {
    "atmost 7 1's",
    "atleast 4 4's",
    "atleast 5 1's AND atleast 3 4's",
    "atleast 2 2's AND atleast 3 4's",
    "atleast 4 4's AND atmost 5 o's",
    "atleast 4 4's AND atmost 3 5's",
    "atleast 4 2's OR atmost 2 4's",
    "atleast 4 3's OR atmost 3 4's",
    "atleast 5 2's OR atleast 4 4's",
    "atleast 3 2's OR atleast 2 w's",
    "atmost 3 4's AND atmost 2 6's",
    "atmost 3 4's AND atmost 3 7's",
    "atmost 2 0's OR atmost 3 4's",
    "2 inrange [1, 6] AND 4 inrange [1, 4]",
    "4 inrange [1, 6] AND o inrange [1, 4]",
    "1 inrange [2, 7] OR 2 inrange [4, 5]",
    "1 inrange [1, 2] OR 2 inrange [2, 3]",
    "atleast 2 1's AND atleast 2 2's AND atleast 2 4's",
    "atleast 4 4's OR atleast 4 o's OR atleast 4 w's",
    "atleast 5 2's OR atleast 4 4's OR atleast 3 6's",
    "atmost 4 3's AND atmost 3 4's AND atmost 2 5's",
    "atmost 4 2's AND atleast 3 4's AND atmost 4 w's",
    "atmost 5 1's OR atleast 5 3's OR atmost 2 4's",
    "atmost 3 0's OR atleast 5 3's OR atmost 3 4's",
    "atmost 3 0's OR atmost 4 1's OR atmost 2 4's",
    "atmost 2 0's OR atmost 5 1's OR atmost 2 4's",
    "1 inrange [2, 6] OR 2 inrange [3, 4] OR 3 inrange [6, 7]",
    "atleast 4 0's AND atleast 3 1's AND atleast 2 2's AND atleast 2 4's",
    "atleast 4 4's OR atleast 2 5's OR atleast 2 6's OR atleast 4 o's",
    "atmost 3 2's AND atmost 4 4's AND atmost 3 6's AND atmost 5 w's",
    "6 inrange [1, 7] OR 8 inrange [2, 4] OR o inrange [2, 3] OR w inrange [6, 7]",
    "1 inrange [1, 6] OR 5 inrange [1, 2] OR o inrange [3, 6] OR w inrange [4, 6]",
};

}  // namespace asap::test
