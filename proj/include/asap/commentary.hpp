#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asap/events.hpp"
#include "asap/match_state.hpp"
#include "asap/sport_profile.hpp"

namespace asap {

enum class Confidence { normal, adjusted, low };

const char* confidence_name(Confidence c);
Confidence confidence_from_name(std::string_view name);

struct CommentaryEntry {
    MatchState state;
    std::string text;
    std::optional<AtomicEvent> event;  // explicit for cricket, unset until classified otherwise
    Confidence confidence = Confidence::normal;
    bool operator==(const CommentaryEntry&) const = default;
};

struct CommentaryDocument {
    std::string sport;
    std::string match_id;
    std::vector<CommentaryEntry> entries;
};

/// Parses a canonical commentary document:
///   { sport, match_id, entries: [ { state, period?, text?, runs?, out?, wide? } ] }
/// Entries come back sorted by state. Cricket flags resolve wide > out > runs.
/// Throws SchemaError (with a JSON path) on malformed documents and
/// DuplicateStateError when two non-wide cricket entries share a state.
CommentaryDocument load_commentary(std::string_view document, const SportProfile& profile);

/// Canonical JSON text for a document; load_commentary reads it back unchanged.
std::string dump_commentary(const CommentaryDocument& doc);

/// First taxonomy label (in profile order) whose trigger substrings occur in
/// the lower-cased text. Cricket profiles have no keyword table and always
/// return nullopt.
std::optional<AtomicEvent> classify_event(std::string_view text, const SportProfile& profile);

/// Re-keys scoring entries to the previous entry's state and marks flagged
/// plays low-confidence, according to the profile's timestamp rules. Identity
/// for profiles without rules. Idempotent.
std::vector<CommentaryEntry> adjust_timestamps(std::vector<CommentaryEntry> entries, const SportProfile& profile);

}  // namespace asap
