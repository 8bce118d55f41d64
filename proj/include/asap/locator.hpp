#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asap/frame_source.hpp"
#include "asap/match_state.hpp"
#include "asap/ocr.hpp"
#include "asap/raster.hpp"
#include "asap/sport_profile.hpp"

namespace asap {

/// k indices at the midpoints of k equal strata: floor(i*total/k) + floor(total/(2k)).
std::vector<std::int64_t> sample_indices(std::int64_t total_frames, std::int64_t k);

struct LocatorObservation {
    std::int64_t frame_index = 0;
    std::int64_t timestamp_ms = 0;
    std::string text;                 // empty when the box had no text in this frame
    std::optional<MatchState> state;  // nullopt = parse failure
};

struct CandidateBox {
    Roi box;  // union of the grouped OCR boxes, expanded by the margin
    std::vector<LocatorObservation> observations;
    double score = 0.0;
};

struct LocatorOptions {
    double iou_threshold = 0.5;
    int margin = 4;
    double min_score = 0.6;
    int workers = 1;
};

struct LocatorResult {
    Roi roi;
    Raster reference;
    std::int64_t reference_frame = 0;
    std::vector<CandidateBox> candidates;
    std::size_t chosen = 0;
};

/// Fraction of consecutive successful-parse pairs that move forward (or stay)
/// by no more than the profile's gradual-step bound, over (observations - 1).
double gradual_score(std::span<const LocatorObservation> observations, const SportProfile& profile);

/// Finds the scorecard box whose parsed text advances gradually across the
/// sampled frames and picks its least-occluded crop as the reference template.
/// Throws NoScorecardError (message lists candidate scores) when no candidate
/// reaches min_score.
LocatorResult locate_scorecard(std::span<const Frame> frames, Recognizer& recognizer, const SportProfile& profile,
                               const LocatorOptions& options = {});

/// Samples `samples` frames from the source and locates the scorecard in
/// them. When no candidate reaches min_score the sample count doubles, up to
/// `max_samples` (or the frame count), before the last NoScorecardError is
/// rethrown.
LocatorResult locate_in_source(const FrameSource& source, Recognizer& recognizer, const SportProfile& profile,
                               std::int64_t samples = 32, std::int64_t max_samples = 128,
                               const LocatorOptions& options = {});

/// Locator report document (JSON).
std::string locator_report_json(const LocatorResult& result, const std::string& reference_path);

}  // namespace asap
