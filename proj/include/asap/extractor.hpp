#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asap/events.hpp"
#include "asap/frame_source.hpp"
#include "asap/ocr.hpp"
#include "asap/raster.hpp"
#include "asap/sport_profile.hpp"

namespace asap {

enum class DedupMode {
    last_accepted,  // compare against the last crop sent to OCR
    consecutive,    // compare against the previous non-rejected frame
};

struct ExtractionConfig {
    double reject_threshold = 25.0;  // mean L1 of crop vs reference
    double change_threshold = 3.0;   // mean L1 of crop vs comparison crop
    int stack_capacity = 16;         // crops per OCR call
    int stack_columns = 1;
    int stack_padding = 8;
    std::int64_t repair_window = 150;  // frames either side for majority votes
    int rereads = 2;                   // extra reads of a suspicious candidate's segment
    DedupMode dedup = DedupMode::last_accepted;
    int workers = 1;

    /// Throws Error when thresholds are negative, change > reject, or capacity < 1.
    void validate() const;
};

enum class Verdict { accepted, rejected_occluded, skipped_unchanged };

const char* verdict_name(Verdict v);

struct RawObservation {
    std::int64_t frame = 0;
    Verdict verdict = Verdict::skipped_unchanged;
    std::optional<MatchState> parsed;  // present only when accepted
};

// Per-frame gate in front of OCR: reject crops far from the reference, skip
// crops close to the comparison crop, and pass the rest on as change candidates.
class ChangeDetector {
public:
    enum class Decision { rejected, unchanged, candidate };

    ChangeDetector(Raster reference, double reject_threshold, double change_threshold, DedupMode mode);

    template <typename Derived>
    Decision consider(const Eigen::MatrixBase<Derived>& crop_pixels) {
        if (mean_l1(crop_pixels, reference_) > reject_threshold_) return Decision::rejected;
        const bool unchanged = has_last_ && mean_l1(crop_pixels, last_) <= change_threshold_;
        if (!unchanged || mode_ == DedupMode::consecutive) last_ = crop_pixels;
        const bool first = !has_last_;
        has_last_ = true;
        return unchanged && !first ? Decision::unchanged : Decision::candidate;
    }

private:
    Raster reference_;
    Raster last_;
    bool has_last_ = false;
    double reject_threshold_;
    double change_threshold_;
    DedupMode mode_;
};

struct TimedState {
    std::int64_t frame = 0;
    MatchState state;
    bool operator==(const TimedState&) const = default;
};

struct RepairResult {
    std::vector<TimedState> cleaned;    // non-decreasing under compare_states
    std::vector<std::int64_t> dropped;  // frames of removed observations
    std::vector<std::int64_t> replaced; // frames whose state was replaced by a vote
};

/// Enforces non-decreasing order. An observation is suspicious when it goes
/// back relative to the last kept state, jumps past the profile's gradual-step
/// bound, or sits ahead of a majority of the next few observations. Suspicious
/// observations take the strict-majority state among observations within
/// `window` frames (if that state is itself consistent), otherwise are dropped.
RepairResult repair_states(std::span<const TimedState> raw, const SportProfile& profile, std::int64_t window);

struct ExtractionStats {
    long recognize_calls = 0;
    long candidates = 0;
    long rejected = 0;
    long skipped = 0;
    long demoted = 0;
    long reread_frames = 0;
};

struct ExtractionResult {
    std::vector<StateInterval> intervals;
    std::vector<RawObservation> observations;  // one per frame, in order
    ExtractionStats stats;
    std::vector<std::string> log;
};

/// Full-sequence pass: crop, gate, OCR change candidates in stacked batches,
/// parse, repair, and club frames into state intervals.
ExtractionResult extract_intervals(const FrameSource& frames, const Roi& roi, const Raster& reference,
                                   Recognizer& recognizer, const SportProfile& profile,
                                   const ExtractionConfig& config = {});

}  // namespace asap
