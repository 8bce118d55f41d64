#include <doctest.h>

#include <random>
#include <regex>

#include "asap/errors.hpp"
#include "asap/events.hpp"
#include "asap/match_state.hpp"
#include "support.hpp"

using namespace asap;
using asap::test::profile;

namespace {

const SportProfile& basketball() { return profile("basketball"); }
const SportProfile& football() { return profile("football"); }

GameClock clock_of(std::optional<int> period, int m, int s, ClockDirection d = ClockDirection::counts_down) {
    return GameClock{period, m, s, d};
}

// Independent reading of the clock grammar, evaluated with std::regex.
std::optional<GameClock> regex_clock(const std::string& text, ClockDirection direction) {
    static const std::regex re(R"((?:(?:[qph]([1-9])|([1-9])(?:st|nd|rd|th))\s+)?(\d+):([0-5]\d)(?!\d))",
                               std::regex::icase);
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    GameClock c;
    if (m[1].matched) c.period = std::stoi(m[1]);
    if (m[2].matched) c.period = std::stoi(m[2]);
    c.minutes = std::stoi(m[3]);
    c.seconds = std::stoi(m[4]);
    c.direction = direction;
    return c;
}

// nullopt = ParseError expected.
std::optional<OverBall> regex_over_ball(const std::string& text) {
    static const std::regex re(R"((\d+)\.(\d)(?!\d))");
    std::smatch m;
    if (!std::regex_search(text, m, re)) return std::nullopt;
    const int ball = std::stoi(m[2]);
    if (ball < 1 || ball > 6) return std::nullopt;
    return OverBall{std::stoi(m[1]), ball};
}

std::string fuzz_string(std::mt19937_64& rng) {
    static const std::vector<std::string> pieces = {"0",  "1",  "3",   "5",   "7",  "9",   "12", ".",  ":",  " ",
                                                    "  ", "Q",  "q",   "P",   "h",  "x",   "rd", "st", "TH", "nd",
                                                    "3rd", "Q4 ", "07:41", "30.4", "1.0", "12:5", "45", "OV ", "\t"};
    std::uniform_int_distribution<std::size_t> len(1, 8);
    std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
    // Digit runs stay short enough that every counter fits an int.
    static const std::regex long_run(R"(\d{7})");
    std::string s;
    do {
        s.clear();
        const auto n = len(rng);
        for (std::size_t i = 0; i < n; ++i) s += pieces[pick(rng)];
    } while (std::regex_search(s, long_run));
    return s;
}

MatchState random_over_ball(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> over(0, 60);
    std::uniform_int_distribution<int> ball(1, 6);
    return OverBall{over(rng), ball(rng)};
}

MatchState random_clock(std::mt19937_64& rng, bool with_period, ClockDirection d) {
    std::uniform_int_distribution<int> period(1, 4);
    std::uniform_int_distribution<int> minutes(0, 99);
    std::uniform_int_distribution<int> seconds(0, 59);
    GameClock c;
    if (with_period) c.period = period(rng);
    c.minutes = minutes(rng);
    c.seconds = seconds(rng);
    c.direction = d;
    return c;
}

}  // namespace

TEST_CASE("parse_match_state examples") {
    CHECK(parse_match_state("30.4", asap::test::cricket()) == MatchState{OverBall{30, 4}});
    CHECK(parse_match_state("0.1", asap::test::cricket()) == MatchState{OverBall{0, 1}});
    CHECK(parse_match_state(" 3rd 07:41 ", basketball()) == MatchState{clock_of(3, 7, 41)});
    CHECK(parse_match_state("OV 12.3 LIVE", asap::test::cricket()) == MatchState{OverBall{12, 3}});
    CHECK(parse_match_state("Q2 11:05", basketball()) == MatchState{clock_of(2, 11, 5)});
    CHECK(parse_match_state("67:12", football()) == MatchState{clock_of(std::nullopt, 67, 12, ClockDirection::counts_up)});
}

TEST_CASE("parse_match_state rejects malformed text") {
    CHECK_THROWS_AS(parse_match_state("30.0", asap::test::cricket()), ParseError);
    CHECK_THROWS_AS(parse_match_state("30.7", asap::test::cricket()), ParseError);
    CHECK_THROWS_AS(parse_match_state("", asap::test::cricket()), ParseError);
    CHECK_THROWS_AS(parse_match_state("LIVE", asap::test::cricket()), ParseError);
    CHECK_THROWS_AS(parse_match_state("7:61", basketball()), ParseError);
    CHECK_THROWS_AS(parse_match_state("30.4", basketball()), ParseError);
    CHECK_FALSE(try_parse_match_state("30.45", asap::test::cricket()).has_value());
}

TEST_CASE("clock and over-ball scanners agree with a regex oracle on fuzzed strings") {
    std::mt19937_64 rng(20240611);
    int clock_hits = 0;
    int over_hits = 0;
    for (int i = 0; i < 100; ++i) {
        const std::string s = fuzz_string(rng);
        CAPTURE(s);
        const auto want_clock = regex_clock(s, ClockDirection::counts_down);
        const auto got_clock = try_parse_match_state(s, basketball());
        REQUIRE(want_clock.has_value() == got_clock.has_value());
        if (want_clock) {
            ++clock_hits;
            CHECK(std::get<GameClock>(*got_clock) == *want_clock);
        }
        const auto want_over = regex_over_ball(s);
        if (want_over) {
            ++over_hits;
            CHECK(parse_match_state(s, asap::test::cricket()) == MatchState{*want_over});
        } else {
            CHECK_THROWS_AS(parse_match_state(s, asap::test::cricket()), ParseError);
        }
    }
    // The fuzz alphabet must actually exercise both grammars.
    CHECK(clock_hits > 10);
    CHECK(over_hits > 10);
}

TEST_CASE("format then parse round-trips") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const auto ob = random_over_ball(rng);
        CHECK(parse_match_state(format_state(ob), asap::test::cricket()) == ob);
        const auto down = random_clock(rng, i % 2 == 0, ClockDirection::counts_down);
        CHECK(parse_match_state(format_state(down), basketball()) == down);
        const auto up = random_clock(rng, i % 3 == 0, ClockDirection::counts_up);
        CHECK(parse_match_state(format_state(up), football()) == up);
    }
}

TEST_CASE("state_successor") {
    CHECK(state_successor(OverBall{30, 4}) == MatchState{OverBall{30, 5}});
    CHECK(state_successor(OverBall{30, 6}) == MatchState{OverBall{31, 1}});
    CHECK(state_successor(clock_of(std::nullopt, 12, 0)) == MatchState{clock_of(std::nullopt, 11, 59)});
    CHECK(state_successor(clock_of(1, 0, 0)) == MatchState{clock_of(1, 0, 0)});
    const auto up = ClockDirection::counts_up;
    CHECK(state_successor(clock_of(std::nullopt, 0, 59, up)) == MatchState{clock_of(std::nullopt, 1, 0, up)});

    for (int m = 0; m < 20; ++m) {
        for (int k = 0; k < 5; ++k) {
            MatchState s = OverBall{m, 1};
            for (int i = 0; i < 6 * k; ++i) s = state_successor(s);
            CHECK(s == MatchState{OverBall{m + k, 1}});
        }
    }
}

TEST_CASE("compare_states examples") {
    CHECK(compare_states(OverBall{30, 6}, OverBall{31, 1}) == std::strong_ordering::less);
    CHECK(compare_states(clock_of(1, 10, 0), clock_of(1, 9, 30)) == std::strong_ordering::less);
    CHECK(compare_states(OverBall{3, 3}, OverBall{3, 3}) == std::strong_ordering::equal);
    CHECK(compare_states(clock_of(2, 11, 0), clock_of(1, 1, 0)) == std::strong_ordering::greater);
    CHECK_THROWS_AS(compare_states(OverBall{1, 1}, clock_of(1, 1, 1)), IncomparableError);
    CHECK_THROWS_AS(compare_states(clock_of(1, 1, 1), clock_of(1, 1, 1, ClockDirection::counts_up)),
                    IncomparableError);
}

TEST_CASE("compare_states is a strict total order on each variant") {
    std::mt19937_64 rng(99);
    auto check_order = [](const std::vector<MatchState>& xs) {
        for (const auto& a : xs) {
            for (const auto& b : xs) {
                const auto ab = compare_states(a, b);
                const auto ba = compare_states(b, a);
                CHECK((ab == 0) == (ba == 0));
                CHECK((ab < 0) == (ba > 0));
                CHECK((ab == 0) == (a == b));
                for (const auto& c : xs) {
                    if (ab < 0 && compare_states(b, c) < 0) CHECK(compare_states(a, c) < 0);
                }
            }
        }
    };
    for (int round = 0; round < 4; ++round) {
        std::vector<MatchState> overs, with_period, without_period, up;
        for (int i = 0; i < 20; ++i) {
            overs.push_back(random_over_ball(rng));
            with_period.push_back(random_clock(rng, true, ClockDirection::counts_down));
            without_period.push_back(random_clock(rng, false, ClockDirection::counts_down));
            up.push_back(random_clock(rng, false, ClockDirection::counts_up));
        }
        check_order(overs);
        check_order(with_period);
        check_order(without_period);
        check_order(up);
    }
}

TEST_CASE("state_steps") {
    CHECK(state_steps(OverBall{30, 4}, OverBall{31, 2}) == 4);
    CHECK(state_steps(OverBall{31, 2}, OverBall{30, 4}) == -4);
    CHECK(state_steps(clock_of(1, 10, 0), clock_of(1, 9, 30)) == 30);
    CHECK_FALSE(state_steps(clock_of(1, 10, 0), clock_of(2, 9, 30)).has_value());
}

TEST_CASE("event_runs and tokens") {
    CHECK(event_runs(Runs{4}) == 4);
    CHECK(event_runs(Wide{}) == 1);
    CHECK(event_runs(Wicket{}) == 0);
    CHECK_THROWS_AS(event_runs(PlayLabel{"dunk"}), UnsupportedError);

    for (int i = 0; i < kTokenCount; ++i) {
        const auto t = static_cast<Token>(i);
        const int runs = token_runs(t);
        CHECK(runs >= 0);
        CHECK(runs <= 9);
        CHECK(token_from_symbol(token_symbol(t)) == t);
        CHECK(event_token(token_event(t)) == t);
        CHECK(event_from_label(event_label(token_event(t))) == token_event(t));
    }
    CHECK(token_from_symbol('W') == Token::out);
    CHECK_FALSE(token_from_symbol('x').has_value());
    CHECK(event_label(Runs{1}) == "1 run");
    CHECK(event_label(Runs{4}) == "4 runs");
    CHECK(event_from_label("dunk") == AtomicEvent{PlayLabel{"dunk"}});
    CHECK(format_tokens(parse_tokens("1 4 0 o w 6")) == format_tokens(parse_tokens("140ow6")));
}

TEST_CASE("chain_violation") {
    EventChain ok{{Runs{1}, {OverBall{1, 1}, 0, 9}, std::nullopt},
                  {Wide{}, {OverBall{1, 2}, 10, 19}, std::nullopt},
                  {Runs{0}, {OverBall{1, 2}, 10, 19}, std::nullopt},
                  {Runs{4}, {OverBall{1, 3}, 20, 29}, std::nullopt}};
    CHECK(chain_violation(ok).empty());
    EventChain overlap = ok;
    overlap[3].interval.frame_start = 15;
    CHECK_FALSE(chain_violation(overlap).empty());
    EventChain backwards = ok;
    backwards[3].interval.state = OverBall{0, 6};
    CHECK_FALSE(chain_violation(backwards).empty());
}
