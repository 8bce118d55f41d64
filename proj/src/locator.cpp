#include "asap/locator.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "asap/errors.hpp"
#include "asap/parallel.hpp"

namespace asap {
namespace {

struct Group {
    std::vector<Roi> boxes;
    // (frame position, block) pairs in discovery order.
    std::vector<std::pair<std::size_t, TextBlock>> members;
};

bool gradual_step(const LocatorObservation& a, const LocatorObservation& b, const SportProfile& profile) {
    if (compare_states(*a.state, *b.state) > 0) return false;
    const auto steps = state_steps(*a.state, *b.state);
    if (!steps) return true;  // clock moved into a later period
    if (is_over_ball(*a.state)) return *steps <= profile.max_step_balls;
    const std::int64_t elapsed_s = (b.timestamp_ms - a.timestamp_ms) / 1000;
    return *steps <= elapsed_s + profile.clock_slack_s;
}

Raster median_crop(const std::vector<Raster>& crops) {
    Raster out(crops.front().rows(), crops.front().cols());
    std::vector<std::uint8_t> values(crops.size());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            for (std::size_t i = 0; i < crops.size(); ++i) values[i] = crops[i](r, c);
            const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
            std::nth_element(values.begin(), mid, values.end());
            out(r, c) = *mid;
        }
    }
    return out;
}

}  // namespace

std::vector<std::int64_t> sample_indices(std::int64_t total_frames, std::int64_t k) {
    if (total_frames < 1 || k < 1) throw Error("sample_indices needs positive total and k");
    if (k > total_frames) throw Error("sample_indices: k exceeds frame count");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(k));
    const std::int64_t offset = total_frames / (2 * k);
    for (std::int64_t i = 0; i < k; ++i) {
        const std::int64_t idx = i * total_frames / k + offset;
        if (out.empty() || out.back() != idx) out.push_back(idx);
    }
    return out;
}

double gradual_score(std::span<const LocatorObservation> observations, const SportProfile& profile) {
    if (observations.size() < 2) return 0.0;
    long good = 0;
    const LocatorObservation* prev = nullptr;
    for (const auto& obs : observations) {
        if (!obs.state) continue;
        if (prev && gradual_step(*prev, obs, profile)) ++good;
        prev = &obs;
    }
    return static_cast<double>(good) / static_cast<double>(observations.size() - 1);
}

LocatorResult locate_scorecard(std::span<const Frame> frames, Recognizer& recognizer, const SportProfile& profile,
                               const LocatorOptions& options) {
    if (frames.size() < 4) throw Error("locate_scorecard needs at least 4 sampled frames");
    const int width = static_cast<int>(frames.front().pixels.cols());
    const int height = static_cast<int>(frames.front().pixels.rows());

    std::vector<std::vector<TextBlock>> per_frame(frames.size());
    parallel_for(frames.size(), options.workers,
                 [&](std::size_t i) { per_frame[i] = recognizer.recognize(frames[i].pixels); });

    // Single-linkage grouping: a block joins the first group holding a box
    // with IoU >= threshold.
    std::vector<Group> groups;
    for (std::size_t f = 0; f < per_frame.size(); ++f) {
        for (const auto& block : per_frame[f]) {
            auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
                return std::any_of(g.boxes.begin(), g.boxes.end(),
                                   [&](const Roi& b) { return iou(b, block.box) >= options.iou_threshold; });
            });
            if (it == groups.end()) {
                groups.emplace_back();
                it = std::prev(groups.end());
            }
            it->boxes.push_back(block.box);
            it->members.emplace_back(f, block);
        }
    }

    LocatorResult result;
    for (const auto& g : groups) {
        CandidateBox cand;
        Roi u = g.boxes.front();
        for (const auto& b : g.boxes) u = union_box(u, b);
        cand.box = expand(u, options.margin, width, height);
        for (std::size_t f = 0; f < frames.size(); ++f) {
            std::vector<const TextBlock*> in_frame;
            for (const auto& [pos, block] : g.members) {
                if (pos == f) in_frame.push_back(&block);
            }
            std::sort(in_frame.begin(), in_frame.end(),
                      [](const TextBlock* a, const TextBlock* b) { return a->box.x < b->box.x; });
            LocatorObservation obs{frames[f].index, frames[f].timestamp_ms, {}, std::nullopt};
            for (const auto* b : in_frame) {
                if (!obs.text.empty()) obs.text += ' ';
                obs.text += b->text;
            }
            if (!obs.text.empty()) obs.state = try_parse_match_state(obs.text, profile);
            cand.observations.push_back(std::move(obs));
        }
        cand.score = gradual_score(cand.observations, profile);
        result.candidates.push_back(std::move(cand));
    }

    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < result.candidates.size(); ++i) {
        if (result.candidates[i].score < options.min_score) continue;
        if (!best || result.candidates[i].score > result.candidates[*best].score) best = i;
    }
    if (!best) {
        std::ostringstream msg;
        msg << "no scorecard candidate reached score " << options.min_score << " (";
        for (std::size_t i = 0; i < result.candidates.size(); ++i) {
            const auto& c = result.candidates[i];
            msg << (i ? ", " : "") << "[" << c.box.x << "," << c.box.y << "," << c.box.w << "," << c.box.h
                << "]=" << c.score;
        }
        msg << (result.candidates.empty() ? "no text found)" : ")");
        throw NoScorecardError(msg.str());
    }
    result.chosen = *best;
    const auto& chosen = result.candidates[*best];
    result.roi = chosen.box;

    std::vector<Raster> crops;
    std::vector<std::size_t> crop_frames;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        if (!chosen.observations[f].state) continue;
        crops.emplace_back(crop(frames[f].pixels, result.roi));
        crop_frames.push_back(f);
    }
    const Raster median = median_crop(crops);
    std::size_t pick = 0;
    double best_l1 = mean_l1(crops[0], median);
    for (std::size_t i = 1; i < crops.size(); ++i) {
        const double d = mean_l1(crops[i], median);
        if (d < best_l1) {
            best_l1 = d;
            pick = i;
        }
    }
    result.reference = crops[pick];
    result.reference_frame = frames[crop_frames[pick]].index;
    return result;
}

LocatorResult locate_in_source(const FrameSource& source, Recognizer& recognizer, const SportProfile& profile,
                               std::int64_t samples, std::int64_t max_samples, const LocatorOptions& options) {
    if (samples < 1) throw Error("locate_in_source needs a positive sample count");
    const std::int64_t cap = std::min(std::max(samples, max_samples), source.size());
    std::int64_t k = std::min(samples, source.size());
    for (;;) {
        std::vector<Frame> frames;
        for (const auto idx : sample_indices(source.size(), k)) frames.push_back(source.frame(idx));
        try {
            return locate_scorecard(frames, recognizer, profile, options);
        } catch (const NoScorecardError&) {
            if (k >= cap) throw;
            k = std::min(2 * k, cap);
        }
    }
}

std::string locator_report_json(const LocatorResult& result, const std::string& reference_path) {
    using nlohmann::json;
    const auto box_json = [](const Roi& r) { return json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; };
    json doc;
    doc["roi"] = box_json(result.roi);
    doc["reference_frame"] = result.reference_frame;
    doc["reference_path"] = reference_path;
    doc["chosen"] = result.chosen;
    doc["candidates"] = json::array();
    for (const auto& c : result.candidates) {
        json jc{{"box", box_json(c.box)}, {"score", c.score}, {"observations", json::array()}};
        for (const auto& o : c.observations) {
            jc["observations"].push_back({{"frame", o.frame_index},
                                          {"text", o.text},
                                          {"state", o.state ? json(format_state(*o.state)) : json(nullptr)}});
        }
        doc["candidates"].push_back(std::move(jc));
    }
    return doc.dump(2);
}

}  // namespace asap
