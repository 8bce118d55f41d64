#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace asap {

struct SportProfile;

enum class ClockDirection { counts_up, counts_down };

// Cricket "over.ball" counter, e.g. 30.4 is the 4th ball of the 30th over.
struct OverBall {
    int over = 0;
    int ball = 1;
    bool operator==(const OverBall&) const = default;
};

struct GameClock {
    std::optional<int> period;
    int minutes = 0;
    int seconds = 0;
    ClockDirection direction = ClockDirection::counts_down;
    bool operator==(const GameClock&) const = default;
};

using MatchState = std::variant<OverBall, GameClock>;

/// Extracts the first well-formed state token from raw OCR text.
/// Over-ball grammar: digits '.' digit, the ball digit not followed by another
/// digit and restricted to 1..6. Clock grammar: digits ':' [0-5]digit, optionally
/// preceded by a period marker (Q3, P2, H1, 3rd, 2nd, ...). Throws ParseError.
MatchState parse_match_state(std::string_view text, const SportProfile& profile);
std::optional<MatchState> try_parse_match_state(std::string_view text, const SportProfile& profile);

/// Canonical text form; parse_match_state(format_state(s)) == s.
std::string format_state(const MatchState& state);

MatchState state_successor(const MatchState& state);

/// Total order by game progress. Throws IncomparableError when the variants (or
/// clock directions) differ.
std::strong_ordering compare_states(const MatchState& a, const MatchState& b);

/// Progress from a to b in the variant's natural unit (balls or clock seconds).
/// Negative when b precedes a. For clocks in different periods the result is
/// nullopt: clock time alone says nothing about the distance.
std::optional<std::int64_t> state_steps(const MatchState& a, const MatchState& b);

bool is_over_ball(const MatchState& state);

}  // namespace asap
