#include "asap/aligner.hpp"

#include <cmath>

#include "asap/errors.hpp"
#include "asap/raster.hpp"

namespace asap {
namespace {

bool covers(std::span<const StateInterval> intervals, std::size_t i, const MatchState& key) {
    if (compare_states(intervals[i].state, key) > 0) return false;
    if (i + 1 == intervals.size()) return true;
    return compare_states(key, intervals[i + 1].state) < 0;
}

}  // namespace

std::int64_t event_start_ms(const StateInterval& interval, double fps) {
    return frame_timestamp_ms(interval.frame_start, fps);
}

std::int64_t event_end_ms(const StateInterval& interval, double fps) {
    return frame_timestamp_ms(interval.frame_end + 1, fps);
}

Alignment align(std::span<const StateInterval> intervals, std::span<const CommentaryEntry> entries,
                const SportProfile& profile) {
    Alignment out;
    std::vector<bool> used(intervals.size(), false);

    for (const auto& entry : entries) {
        const auto event = entry.event ? entry.event : classify_event(entry.text, profile);
        if (!event) {
            out.unclassified.push_back(entry);
            continue;
        }

        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < intervals.size(); ++i) {
            if (intervals[i].state == entry.state) hits.push_back(i);
        }
        if (hits.empty() && !profile.is_cricket()) {
            for (std::size_t i = 0; i < intervals.size(); ++i) {
                if (covers(intervals, i, entry.state)) hits.push_back(i);
            }
        }
        if (hits.empty()) {
            out.unmatched_entries.push_back(entry);
            continue;
        }

        AlignedEvent aligned{*event, intervals[hits.front()], {}, entry.confidence};
        if (!entry.text.empty()) aligned.text = entry.text;
        if (hits.size() > 1) {
            ++out.ambiguous;
            aligned.confidence = Confidence::low;
        }
        used[hits.front()] = true;
        out.events.push_back(std::move(aligned));
    }

    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!used[i]) out.unmatched_intervals.push_back(intervals[i]);
    }
    return out;
}

EventChain to_chain(std::span<const AlignedEvent> events) {
    EventChain chain;
    chain.reserve(events.size());
    for (const auto& e : events) chain.push_back({e.event, e.interval, e.text});
    return chain;
}

Verification verify_alignment(std::span<const AlignedEvent> predicted, std::span<const TimestampMark> marks,
                              const SportProfile& profile, double fps) {
    if (predicted.size() != marks.size()) {
        throw LengthMismatchError("predicted " + std::to_string(predicted.size()) + " events, marks " +
                                  std::to_string(marks.size()));
    }
    Verification v;
    v.correct.resize(marks.size(), false);
    std::size_t hits = 0;
    const auto tol_ms = static_cast<std::int64_t>(std::llround(profile.tolerance_s * 1000.0));
    for (std::size_t i = 0; i < marks.size(); ++i) {
        const auto& p = predicted[i];
        const auto& m = marks[i];
        if (!(p.event == m.event)) continue;
        const std::int64_t start = event_start_ms(p.interval, fps);
        const std::int64_t end = event_end_ms(p.interval, fps);
        bool ok = false;
        if (profile.verification == VerificationMode::minute) {
            const auto minute = [](std::int64_t ms) { return ms / 60000; };
            ok = minute(m.timestamp_ms) >= minute(start) && minute(m.timestamp_ms) <= minute(end);
        } else {
            ok = m.timestamp_ms >= start - tol_ms && m.timestamp_ms <= end + tol_ms;
        }
        v.correct[i] = ok;
        hits += ok;
    }
    v.accuracy = marks.empty() ? 1.0 : static_cast<double>(hits) / static_cast<double>(marks.size());
    return v;
}

}  // namespace asap
