#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asap/match_state.hpp"

namespace asap {

enum class StateGrammar { over_ball, clock };

// How a human timestamp mark is checked against an aligned interval.
enum class VerificationMode {
    interval,  // mark within [start - tol, end + tol]
    minute,    // mark falls in a minute touched by the interval
};

struct KeywordRule {
    std::string label;
    std::vector<std::string> triggers;  // lowercase substrings
};

struct SportProfile {
    std::string sport;
    StateGrammar grammar = StateGrammar::over_ball;
    ClockDirection clock_direction = ClockDirection::counts_down;
    std::vector<std::string> taxonomy;
    std::vector<KeywordRule> keywords;
    VerificationMode verification = VerificationMode::interval;
    double tolerance_s = 1.0;
    // Gradual-change bounds used by the locator and by state repair.
    int max_step_balls = 12;
    int clock_slack_s = 60;
    std::map<char, char> token_aliases;
    // Entries whose text carries one of these triggers are re-keyed to the
    // previous entry's state (scores are timestamped at the end of the play).
    std::vector<std::string> anchor_to_previous;
    // Entries flagged low-confidence but left in place.
    std::vector<std::string> low_confidence;

    bool is_cricket() const { return grammar == StateGrammar::over_ball; }
};

class ProfileRegistry {
public:
    static ProfileRegistry from_json(std::string_view text);
    static ProfileRegistry from_file(const std::filesystem::path& path);
    /// The profile table checked into config/.
    static const ProfileRegistry& builtin();

    const SportProfile& get(std::string_view sport) const;
    bool contains(std::string_view sport) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, SportProfile, std::less<>> profiles_;
};

/// Throws SchemaError when taxonomy labels repeat or a keyword rule names a
/// label outside the taxonomy.
void validate_profile(const SportProfile& profile);

}  // namespace asap
