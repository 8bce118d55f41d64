#include "asap/events.hpp"

#include <cctype>

#include "asap/errors.hpp"

namespace asap {

bool is_cricket_event(const AtomicEvent& e) { return !std::holds_alternative<PlayLabel>(e); }

int event_runs(const AtomicEvent& e) {
    if (const auto* r = std::get_if<Runs>(&e)) return r->n;
    if (std::holds_alternative<Wide>(e)) return 1;
    if (std::holds_alternative<Wicket>(e)) return 0;
    throw UnsupportedError("event_runs is defined for cricket events only, got \"" +
                           std::get<PlayLabel>(e).name + "\"");
}

std::string event_label(const AtomicEvent& e) {
    if (const auto* r = std::get_if<Runs>(&e)) {
        return std::to_string(r->n) + (r->n == 1 ? " run" : " runs");
    }
    if (std::holds_alternative<Wicket>(e)) return "wicket";
    if (std::holds_alternative<Wide>(e)) return "wide";
    return std::get<PlayLabel>(e).name;
}

AtomicEvent event_from_label(std::string_view label) {
    if (label == "wicket") return Wicket{};
    if (label == "wide") return Wide{};
    if (label.size() >= 5 && std::isdigit(static_cast<unsigned char>(label[0]))) {
        const auto rest = label.substr(1);
        if (rest == " run" || rest == " runs") return Runs{label[0] - '0'};
    }
    return PlayLabel{std::string(label)};
}

char token_symbol(Token t) {
    switch (t) {
        case Token::out: return 'o';
        case Token::wide: return 'w';
        default: return static_cast<char>('0' + static_cast<int>(t));
    }
}

std::optional<Token> token_from_symbol(char c) {
    if (c >= '0' && c <= '9') return static_cast<Token>(c - '0');
    if (c == 'o' || c == 'W') return Token::out;
    if (c == 'w') return Token::wide;
    return std::nullopt;
}

std::optional<Token> event_token(const AtomicEvent& e) {
    if (const auto* r = std::get_if<Runs>(&e)) {
        if (r->n >= 0 && r->n <= 9) return static_cast<Token>(r->n);
        return std::nullopt;
    }
    if (std::holds_alternative<Wicket>(e)) return Token::out;
    if (std::holds_alternative<Wide>(e)) return Token::wide;
    return std::nullopt;
}

AtomicEvent token_event(Token t) {
    if (t == Token::out) return Wicket{};
    if (t == Token::wide) return Wide{};
    return Runs{static_cast<int>(t)};
}

int token_runs(Token t) { return event_runs(token_event(t)); }

std::string chain_violation(const EventChain& chain) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& cur = chain[i].interval;
        if (cur.frame_start > cur.frame_end) {
            return "link " + std::to_string(i) + " has frame_start > frame_end";
        }
        if (i == 0) continue;
        const auto& prev = chain[i - 1].interval;
        if (cur == prev) continue;
        if (cur.frame_start <= prev.frame_end) {
            return "link " + std::to_string(i) + " does not start after link " + std::to_string(i - 1);
        }
        if (is_over_ball(cur.state) && is_over_ball(prev.state) && compare_states(prev.state, cur.state) > 0) {
            return "link " + std::to_string(i) + " goes back in over.ball order";
        }
    }
    return {};
}

std::vector<Token> chain_tokens(const EventChain& chain) {
    std::vector<Token> out;
    out.reserve(chain.size());
    for (const auto& link : chain) {
        if (auto t = event_token(link.event)) out.push_back(*t);
    }
    return out;
}

std::vector<Token> parse_tokens(std::string_view text) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
        const auto t = token_from_symbol(c);
        if (!t) throw ParseError("unknown event token '" + std::string(1, c) + "' at offset " + std::to_string(i));
        out.push_back(*t);
    }
    return out;
}

std::string format_tokens(std::span<const Token> tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += token_symbol(tokens[i]);
    }
    return out;
}

}  // namespace asap
