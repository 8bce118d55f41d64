#include "asap/match_state.hpp"

#include <cctype>
#include <cstdio>

#include "asap/errors.hpp"
#include "asap/sport_profile.hpp"

namespace asap {
namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Digit runs longer than this are OCR garbage, not an over or minute count.
constexpr std::size_t kMaxCounterDigits = 9;

std::optional<int> to_int(std::string_view digits) {
    if (digits.empty() || digits.size() > kMaxCounterDigits) return std::nullopt;
    int v = 0;
    for (char c : digits) v = v * 10 + (c - '0');
    return v;
}

struct OverBallScan {
    std::optional<OverBall> state;
    bool bad_ball = false;
};

OverBallScan scan_over_ball(std::string_view text) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_digit(text[j])) ++j;
        // Need '.', one digit, and no digit after it.
        if (j + 1 < text.size() && text[j] == '.' && is_digit(text[j + 1]) &&
            (j + 2 >= text.size() || !is_digit(text[j + 2]))) {
            const int ball = text[j + 1] - '0';
            const auto over = to_int(text.substr(i, j - i));
            if (!over) return {std::nullopt, true};
            if (ball < 1 || ball > 6) return {std::nullopt, true};
            return {OverBall{*over, ball}, false};
        }
        i = j;
    }
    return {};
}

// Period marker ending right before `end`:
// "Q3", "P2", "H1" or "3rd", "1st", "2nd", "4th". Case-insensitive. At least one
// whitespace character must separate marker and clock ("Q307:41" is 307:41).
std::optional<int> period_before(std::string_view text, std::size_t end) {
    std::size_t k = end;
    while (k > 0 && std::isspace(static_cast<unsigned char>(text[k - 1]))) --k;
    if (k == end) return std::nullopt;
    if (k >= 2) {
        const char prefix = lower(text[k - 2]);
        const char d = text[k - 1];
        if ((prefix == 'q' || prefix == 'p' || prefix == 'h') && d >= '1' && d <= '9') return d - '0';
    }
    if (k >= 3) {
        const char d = text[k - 3];
        const std::string suffix{lower(text[k - 2]), lower(text[k - 1])};
        if (d >= '1' && d <= '9' && (suffix == "st" || suffix == "nd" || suffix == "rd" || suffix == "th")) {
            return d - '0';
        }
    }
    return std::nullopt;
}

std::optional<GameClock> scan_clock(std::string_view text, ClockDirection direction) {
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_digit(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_digit(text[j])) ++j;
        if (j + 2 < text.size() && text[j] == ':' && text[j + 1] >= '0' && text[j + 1] <= '5' &&
            is_digit(text[j + 2]) && (j + 3 >= text.size() || !is_digit(text[j + 3]))) {
            const auto minutes = to_int(text.substr(i, j - i));
            if (minutes) {
                GameClock clock;
                clock.period = period_before(text, i);
                clock.minutes = *minutes;
                clock.seconds = (text[j + 1] - '0') * 10 + (text[j + 2] - '0');
                clock.direction = direction;
                return clock;
            }
        }
        i = j;
    }
    return std::nullopt;
}

std::int64_t elapsed_seconds(const GameClock& c) {
    const std::int64_t shown = static_cast<std::int64_t>(c.minutes) * 60 + c.seconds;
    return c.direction == ClockDirection::counts_down ? -shown : shown;
}

void require_same_variant(const MatchState& a, const MatchState& b) {
    if (a.index() != b.index()) throw IncomparableError("cannot compare over-ball with clock state");
    if (const auto* ca = std::get_if<GameClock>(&a)) {
        if (ca->direction != std::get<GameClock>(b).direction) {
            throw IncomparableError("cannot compare clocks running in different directions");
        }
    }
}

}  // namespace

std::optional<MatchState> try_parse_match_state(std::string_view text, const SportProfile& profile) {
    if (profile.grammar == StateGrammar::over_ball) {
        const auto scan = scan_over_ball(text);
        if (scan.state) return MatchState{*scan.state};
        return std::nullopt;
    }
    if (auto clock = scan_clock(text, profile.clock_direction)) return MatchState{*clock};
    return std::nullopt;
}

MatchState parse_match_state(std::string_view text, const SportProfile& profile) {
    if (profile.grammar == StateGrammar::over_ball) {
        const auto scan = scan_over_ball(text);
        if (scan.state) return *scan.state;
        if (scan.bad_ball) throw ParseError("ball digit out of range 1..6 in \"" + std::string(text) + "\"");
        throw ParseError("no over.ball token in \"" + std::string(text) + "\"");
    }
    if (auto clock = scan_clock(text, profile.clock_direction)) return *clock;
    throw ParseError("no clock token in \"" + std::string(text) + "\"");
}

std::string format_state(const MatchState& state) {
    char buf[48];
    if (const auto* ob = std::get_if<OverBall>(&state)) {
        std::snprintf(buf, sizeof buf, "%d.%d", ob->over, ob->ball);
        return buf;
    }
    const auto& c = std::get<GameClock>(state);
    if (c.period) {
        std::snprintf(buf, sizeof buf, "Q%d %02d:%02d", *c.period, c.minutes, c.seconds);
    } else {
        std::snprintf(buf, sizeof buf, "%02d:%02d", c.minutes, c.seconds);
    }
    return buf;
}

MatchState state_successor(const MatchState& state) {
    if (const auto* ob = std::get_if<OverBall>(&state)) {
        if (ob->ball < 6) return OverBall{ob->over, ob->ball + 1};
        return OverBall{ob->over + 1, 1};
    }
    GameClock next = std::get<GameClock>(state);
    if (next.direction == ClockDirection::counts_down) {
        if (next.seconds > 0) {
            --next.seconds;
        } else if (next.minutes > 0) {
            --next.minutes;
            next.seconds = 59;
        }
    } else if (next.seconds < 59) {
        ++next.seconds;
    } else {
        ++next.minutes;
        next.seconds = 0;
    }
    return next;
}

std::strong_ordering compare_states(const MatchState& a, const MatchState& b) {
    require_same_variant(a, b);
    if (const auto* oa = std::get_if<OverBall>(&a)) {
        const auto& ob = std::get<OverBall>(b);
        if (auto c = oa->over <=> ob.over; c != 0) return c;
        return oa->ball <=> ob.ball;
    }
    const auto& ca = std::get<GameClock>(a);
    const auto& cb = std::get<GameClock>(b);
    if (ca.period && cb.period) {
        if (auto c = *ca.period <=> *cb.period; c != 0) return c;
    }
    return elapsed_seconds(ca) <=> elapsed_seconds(cb);
}

std::optional<std::int64_t> state_steps(const MatchState& a, const MatchState& b) {
    require_same_variant(a, b);
    if (const auto* oa = std::get_if<OverBall>(&a)) {
        const auto& ob = std::get<OverBall>(b);
        const std::int64_t ia = static_cast<std::int64_t>(oa->over) * 6 + (oa->ball - 1);
        const std::int64_t ib = static_cast<std::int64_t>(ob.over) * 6 + (ob.ball - 1);
        return ib - ia;
    }
    const auto& ca = std::get<GameClock>(a);
    const auto& cb = std::get<GameClock>(b);
    if (ca.period && cb.period && *ca.period != *cb.period) return std::nullopt;
    return elapsed_seconds(cb) - elapsed_seconds(ca);
}

bool is_over_ball(const MatchState& state) { return std::holds_alternative<OverBall>(state); }

}  // namespace asap
