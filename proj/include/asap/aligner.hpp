#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asap/commentary.hpp"
#include "asap/events.hpp"
#include "asap/sport_profile.hpp"

namespace asap {

struct AlignedEvent {
    AtomicEvent event;
    StateInterval interval;
    std::optional<std::string> text;
    Confidence confidence = Confidence::normal;
    bool operator==(const AlignedEvent&) const = default;
};

struct Alignment {
    std::vector<AlignedEvent> events;
    std::vector<CommentaryEntry> unmatched_entries;  // no interval carries the key
    std::vector<CommentaryEntry> unclassified;       // text matched no taxonomy label
    std::vector<StateInterval> unmatched_intervals;  // no commentary entry landed here
    std::size_t ambiguous = 0;                       // entries that matched several intervals
};

/// Joins intervals with commentary by match state. Cricket keys must match an
/// interval state exactly; clock keys match the interval whose state range
/// [s_i, s_i+1) covers them. Entries without an explicit event are classified
/// from their text. An entry matching several intervals goes to the earliest
/// one and is flagged low-confidence.
Alignment align(std::span<const StateInterval> intervals, std::span<const CommentaryEntry> entries,
                const SportProfile& profile);

/// Event start and end in milliseconds: frame_start/fps and (frame_end+1)/fps.
std::int64_t event_start_ms(const StateInterval& interval, double fps);
std::int64_t event_end_ms(const StateInterval& interval, double fps);

EventChain to_chain(std::span<const AlignedEvent> events);

/// SubRip text, one cue per event, LF line endings.
std::string to_srt(std::span<const AlignedEvent> events, double fps);
/// "HH:MM:SS,mmm"
std::string srt_timestamp(std::int64_t ms);

struct TimestampMark {
    AtomicEvent event;
    std::int64_t timestamp_ms = 0;
};

struct Verification {
    double accuracy = 0.0;
    std::vector<bool> correct;  // one per mark
};

/// Scores human (or synthetic) marks against predicted events, pairwise in
/// order. A mark is correct when its event matches and its time falls inside
/// the predicted interval widened by the profile tolerance (interval mode) or
/// inside a minute touched by the interval (minute mode). Throws
/// LengthMismatchError when the lists differ in length.
Verification verify_alignment(std::span<const AlignedEvent> predicted, std::span<const TimestampMark> marks,
                              const SportProfile& profile, double fps);

}  // namespace asap
