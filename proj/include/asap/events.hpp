#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asap/match_state.hpp"

namespace asap {

struct Runs {
    int n = 0;
    bool operator==(const Runs&) const = default;
};
struct Wicket {
    bool operator==(const Wicket&) const = default;
};
struct Wide {
    bool operator==(const Wide&) const = default;
};
// Non-cricket event drawn from a sport profile's taxonomy.
struct PlayLabel {
    std::string name;
    bool operator==(const PlayLabel&) const = default;
};

using AtomicEvent = std::variant<Runs, Wicket, Wide, PlayLabel>;

bool is_cricket_event(const AtomicEvent& e);

/// Runs credited to the batting side: Runs(n) -> n, Wide -> 1, Wicket -> 0.
/// Throws UnsupportedError for non-cricket events.
int event_runs(const AtomicEvent& e);

/// Display label: "1 run", "4 runs", "wicket", "wide", or the play label.
std::string event_label(const AtomicEvent& e);
/// Inverse of event_label. Unknown text becomes a PlayLabel.
AtomicEvent event_from_label(std::string_view label);

// The 12-symbol cricket alphabet used by queries: 0..9 runs, o (out), w (wide).
enum class Token : std::uint8_t {
    r0, r1, r2, r3, r4, r5, r6, r7, r8, r9, out, wide
};
inline constexpr int kTokenCount = 12;

char token_symbol(Token t);
/// 'W' is accepted as an alias of 'o'.
std::optional<Token> token_from_symbol(char c);
std::optional<Token> event_token(const AtomicEvent& e);
AtomicEvent token_event(Token t);
int token_runs(Token t);

struct StateInterval {
    MatchState state;
    std::int64_t frame_start = 0;
    std::int64_t frame_end = 0;
    bool operator==(const StateInterval&) const = default;
};

struct ChainLink {
    AtomicEvent event;
    StateInterval interval;
    std::optional<std::string> commentary;
    bool operator==(const ChainLink&) const = default;
};

using EventChain = std::vector<ChainLink>;

/// Checks the chain ordering invariants. Links that share one interval (a wide
/// and its re-delivery under one displayed state) are allowed; otherwise each
/// interval must start after the previous one ends, and cricket states must be
/// non-decreasing. Returns an empty string when valid, a description otherwise.
std::string chain_violation(const EventChain& chain);

std::vector<Token> chain_tokens(const EventChain& chain);

/// Parses "1 4 0 o w 6" (whitespace separated or contiguous symbols).
std::vector<Token> parse_tokens(std::string_view text);
std::string format_tokens(std::span<const Token> tokens);

}  // namespace asap
