#include "asap/extractor.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "asap/errors.hpp"
#include "asap/parallel.hpp"

namespace asap {
namespace {

// Later observations consulted when deciding whether one is a forward outlier.
constexpr std::size_t kLookahead = 3;

bool step_ok(const MatchState& prev, const MatchState& next, const SportProfile& profile) {
    if (compare_states(prev, next) > 0) return false;
    const auto steps = state_steps(prev, next);
    if (!steps) return true;
    if (is_over_ball(prev)) return *steps <= profile.max_step_balls;
    // Clock states are read on change, so a long stoppage shows up as one step.
    return true;
}

struct ReadJob {
    std::size_t candidate;
    std::int64_t frame;
    Raster crop;
};

// OCRs crops in stacked batches; returns the destacked text per job.
std::vector<std::string> read_batches(std::vector<ReadJob>& jobs, Recognizer& recognizer, const ExtractionConfig& cfg,
                                      long& calls) {
    std::vector<std::string> texts(jobs.size());
    const std::size_t cap = static_cast<std::size_t>(cfg.stack_capacity);
    const std::size_t batches = (jobs.size() + cap - 1) / cap;
    parallel_for(batches, cfg.workers, [&](std::size_t b) {
        const std::size_t lo = b * cap;
        const std::size_t hi = std::min(jobs.size(), lo + cap);
        std::vector<IndexedCrop> crops;
        crops.reserve(hi - lo);
        // Slots are keyed by job position so duplicate frames stay distinct.
        for (std::size_t j = lo; j < hi; ++j) crops.push_back({static_cast<std::int64_t>(j), std::move(jobs[j].crop)});
        const auto stacked = stack_crops(crops, cfg.stack_columns, cfg.stack_padding);
        const auto blocks = recognizer.recognize(stacked.composite);
        auto result = destack(blocks, stacked.layout);
        for (std::size_t j = lo; j < hi; ++j) texts[j] = std::move(result.texts[static_cast<std::int64_t>(j)]);
    });
    calls += static_cast<long>(batches);
    return texts;
}

std::optional<MatchState> majority_state(const std::vector<std::optional<MatchState>>& reads) {
    for (const auto& candidate : reads) {
        if (!candidate) continue;
        const auto n = std::count(reads.begin(), reads.end(), candidate);
        if (2 * static_cast<std::size_t>(n) > reads.size()) return candidate;
    }
    return std::nullopt;
}

}  // namespace

void ExtractionConfig::validate() const {
    if (reject_threshold < 0 || change_threshold < 0) throw Error("thresholds must be >= 0");
    if (change_threshold > reject_threshold) throw Error("change_threshold must not exceed reject_threshold");
    if (stack_capacity < 1) throw Error("stack capacity must be >= 1");
    if (stack_columns < 1) throw Error("stack columns must be >= 1");
    if (repair_window < 0) throw Error("repair window must be >= 0");
    if (rereads < 0) throw Error("rereads must be >= 0");
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::accepted: return "accepted";
        case Verdict::rejected_occluded: return "rejected-occluded";
        case Verdict::skipped_unchanged: return "skipped-unchanged";
    }
    return "?";
}

ChangeDetector::ChangeDetector(Raster reference, double reject_threshold, double change_threshold, DedupMode mode)
    : reference_(std::move(reference)),
      reject_threshold_(reject_threshold),
      change_threshold_(change_threshold),
      mode_(mode) {}

RepairResult repair_states(std::span<const TimedState> raw, const SportProfile& profile, std::int64_t window) {
    RepairResult out;
    const TimedState* prev = nullptr;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& cur = raw[i];
        bool suspicious = prev && !step_ok(prev->state, cur.state, profile);

        if (!suspicious) {
            // Ahead of what most of the next observations say?
            std::size_t later = 0;
            std::size_t behind = 0;
            for (std::size_t j = i + 1; j < raw.size() && later < kLookahead; ++j, ++later) {
                const bool below = compare_states(raw[j].state, cur.state) < 0;
                const bool above_prev = !prev || compare_states(prev->state, raw[j].state) <= 0;
                if (below && above_prev) ++behind;
            }
            suspicious = later >= 2 && 2 * behind > later;
        }

        if (!suspicious) {
            out.cleaned.push_back(cur);
            prev = &out.cleaned.back();
            continue;
        }

        std::map<std::size_t, std::size_t> votes;  // index of first occurrence -> count
        std::size_t in_window = 0;
        for (std::size_t j = 0; j < raw.size(); ++j) {
            if (std::llabs(raw[j].frame - cur.frame) > window) continue;
            ++in_window;
            std::size_t first = j;
            for (std::size_t k = 0; k < j; ++k) {
                if (raw[k].state == raw[j].state && std::llabs(raw[k].frame - cur.frame) <= window) {
                    first = k;
                    break;
                }
            }
            ++votes[first];
        }
        std::optional<MatchState> winner;
        for (const auto& [idx, count] : votes) {
            if (2 * count > in_window) winner = raw[idx].state;
        }
        if (winner && (!prev || step_ok(prev->state, *winner, profile)) && !(*winner == cur.state)) {
            out.cleaned.push_back({cur.frame, *winner});
            out.replaced.push_back(cur.frame);
            prev = &out.cleaned.back();
        } else {
            out.dropped.push_back(cur.frame);
        }
    }
    return out;
}

ExtractionResult extract_intervals(const FrameSource& frames, const Roi& roi, const Raster& reference,
                                   Recognizer& recognizer, const SportProfile& profile,
                                   const ExtractionConfig& config) {
    config.validate();
    if (!roi.fits(frames.width(), frames.height())) throw DimensionMismatchError("roi outside frame bounds");
    if (reference.cols() != roi.w || reference.rows() != roi.h) {
        throw DimensionMismatchError("reference template size differs from roi");
    }

    ExtractionResult result;
    const std::int64_t n = frames.size();
    result.observations.resize(static_cast<std::size_t>(n));

    ChangeDetector detector(reference, config.reject_threshold, config.change_threshold, config.dedup);
    std::vector<ReadJob> jobs;
    std::vector<std::vector<std::int64_t>> segment;  // skipped frames following each candidate

    for (std::int64_t i = 0; i < n; ++i) {
        auto& obs = result.observations[static_cast<std::size_t>(i)];
        obs.frame = i;
        const Raster px = frames.pixels(i);
        const auto block = crop(px, roi);
        switch (detector.consider(block)) {
            case ChangeDetector::Decision::rejected:
                obs.verdict = Verdict::rejected_occluded;
                ++result.stats.rejected;
                break;
            case ChangeDetector::Decision::unchanged:
                obs.verdict = Verdict::skipped_unchanged;
                ++result.stats.skipped;
                if (!segment.empty()) segment.back().push_back(i);
                break;
            case ChangeDetector::Decision::candidate:
                obs.verdict = Verdict::accepted;
                jobs.push_back({jobs.size(), i, Raster(block)});
                segment.emplace_back();
                break;
        }
    }
    result.stats.candidates = static_cast<long>(jobs.size());

    std::vector<std::int64_t> cand_frame;
    for (const auto& j : jobs) cand_frame.push_back(j.frame);
    const std::size_t m = jobs.size();

    std::vector<std::vector<std::optional<MatchState>>> reads(m);
    {
        const auto texts = read_batches(jobs, recognizer, config, result.stats.recognize_calls);
        for (std::size_t c = 0; c < m; ++c) reads[c].push_back(try_parse_match_state(texts[c], profile));
    }

    const auto current_values = [&] {
        std::vector<std::optional<MatchState>> values(m);
        for (std::size_t c = 0; c < m; ++c) {
            values[c] = reads[c].size() == 1 ? reads[c][0] : majority_state(reads[c]);
        }
        return values;
    };
    const auto run_repair = [&](const std::vector<std::optional<MatchState>>& values) {
        std::vector<TimedState> seq;
        for (std::size_t c = 0; c < m; ++c) {
            if (values[c]) seq.push_back({cand_frame[c], *values[c]});
        }
        return repair_states(seq, profile, config.repair_window);
    };

    auto values = current_values();
    auto repaired = run_repair(values);

    if (config.rereads > 0) {
        std::set<std::int64_t> flagged_frames(repaired.dropped.begin(), repaired.dropped.end());
        flagged_frames.insert(repaired.replaced.begin(), repaired.replaced.end());
        for (std::size_t k = 1; k < repaired.cleaned.size(); ++k) {
            // A visual change that parses to the same state: one of the two reads is wrong.
            if (repaired.cleaned[k].state == repaired.cleaned[k - 1].state) {
                flagged_frames.insert(repaired.cleaned[k].frame);
                flagged_frames.insert(repaired.cleaned[k - 1].frame);
            }
        }
        std::vector<ReadJob> extra;
        for (std::size_t c = 0; c < m; ++c) {
            if (values[c] && !flagged_frames.contains(cand_frame[c])) continue;
            const auto& seg = segment[c];
            const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(config.rereads), seg.size());
            for (std::size_t r = 0; r < want; ++r) {
                // Spread re-reads over the segment.
                const std::int64_t f = seg[(r + 1) * seg.size() / (want + 1)];
                extra.push_back({c, f, Raster(crop(frames.pixels(f), roi))});
            }
        }
        if (!extra.empty()) {
            result.stats.reread_frames = static_cast<long>(extra.size());
            const auto texts = read_batches(extra, recognizer, config, result.stats.recognize_calls);
            for (std::size_t e = 0; e < extra.size(); ++e) {
                reads[extra[e].candidate].push_back(try_parse_match_state(texts[e], profile));
            }
            values = current_values();
            repaired = run_repair(values);
        }
    }

    for (auto f : repaired.dropped) result.log.push_back("frame " + std::to_string(f) + ": dropped by state repair");
    for (auto f : repaired.replaced) {
        result.log.push_back("frame " + std::to_string(f) + ": replaced by window majority");
    }

    std::map<std::int64_t, MatchState> kept;
    for (const auto& t : repaired.cleaned) kept.emplace(t.frame, t.state);
    for (std::size_t c = 0; c < m; ++c) {
        auto& obs = result.observations[static_cast<std::size_t>(cand_frame[c])];
        const auto it = kept.find(cand_frame[c]);
        if (it != kept.end()) {
            obs.parsed = it->second;
            continue;
        }
        obs.verdict = Verdict::skipped_unchanged;
        ++result.stats.demoted;
        if (!values[c]) result.log.push_back("frame " + std::to_string(cand_frame[c]) + ": unparseable OCR text");
    }

    // Club frames: each new state opens an interval at its first accepted frame;
    // the previous one closes just before it. The last runs to the end of stream.
    for (const auto& t : repaired.cleaned) {
        if (!result.intervals.empty() && result.intervals.back().state == t.state) continue;
        if (!result.intervals.empty()) result.intervals.back().frame_end = t.frame - 1;
        result.intervals.push_back({t.state, t.frame, n - 1});
    }
    return result;
}

}  // namespace asap
