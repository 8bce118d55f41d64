#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asap/aligner.hpp"
#include "asap/commentary.hpp"
#include "asap/frame_source.hpp"
#include "asap/raster.hpp"
#include "asap/sport_profile.hpp"

namespace asap::synth {

enum class OverlayStyle { flat, stripes };

struct Occlusion {
    std::int64_t start = 0;  // inclusive
    std::int64_t end = 0;    // inclusive
    OverlayStyle style = OverlayStyle::flat;
};

struct ScriptEvent {
    MatchState state;
    AtomicEvent event;
    std::int64_t frames = 1;
    std::string text;
};

struct Scenario {
    std::string sport = "cricket";
    std::string match_id = "synth";
    double fps = 30.0;
    int width = 320;
    int height = 180;
    int panel_x = 16;
    int panel_y = 16;
    int scale = 2;
    std::string prefix = "OV ";               // static text drawn before the state
    std::optional<std::string> banner;        // static text elsewhere on screen
    int noise_amplitude = 8;
    std::uint64_t seed = 0;
    std::vector<ScriptEvent> script;
    std::vector<Occlusion> occlusions;

    std::int64_t frame_count() const;
};

// Panel geometry.
inline constexpr std::uint8_t kBackgroundLevel = 90;
inline constexpr std::uint8_t kPanelLevel = 30;
inline constexpr std::uint8_t kInkLevel = 210;
inline constexpr std::uint8_t kOverlayLevel = 235;
inline constexpr int kTextInset = 6;  // panel edge to text
inline constexpr int kRoiMargin = 4;  // text box to ground-truth ROI

std::string scoreboard_text(const Scenario& sc, const MatchState& state);

/// Ground-truth scorecard ROI: the rendered text box grown by kRoiMargin.
Roi scenario_roi(const Scenario& sc);

/// Throws Error on empty scripts, non-positive durations, out-of-range
/// occlusions or a scorecard that does not fit the frame.
void validate(const Scenario& sc);

Raster render_frame(const MatchState& state, const Scenario& sc, std::int64_t frame_index);

// Renders frames on demand; no disk involved.
class SyntheticFrameSource final : public FrameSource {
public:
    explicit SyntheticFrameSource(Scenario scenario);
    std::int64_t size() const override { return static_cast<std::int64_t>(state_of_frame_.size()); }
    double fps() const override { return scenario_.fps; }
    int width() const override { return scenario_.width; }
    int height() const override { return scenario_.height; }
    Raster pixels(std::int64_t index) const override;

    const Scenario& scenario() const { return scenario_; }

private:
    Scenario scenario_;
    std::vector<std::size_t> state_of_frame_;  // script position per frame
    Raster background_;
};

struct GroundTruth {
    std::vector<StateInterval> intervals;
    std::vector<AlignedEvent> events;
    CommentaryDocument commentary;
};

/// Truth derived from the script: consecutive events that display the same
/// state (a wide and its re-delivery) share one interval.
GroundTruth ground_truth(const Scenario& sc);

/// Writes frames/ (PNG + manifest.json), truth_intervals.jsonl,
/// truth_events.jsonl, truth_marks.jsonl and commentary.json under out_dir.
GroundTruth generate_match(const Scenario& sc, const std::filesystem::path& out_dir, int workers = 1);

struct CricketOptions {
    std::size_t deliveries = 30;  // legal balls
    std::int64_t min_frames = 20;
    std::int64_t max_frames = 60;
    int first_over_min = 10;      // keeps the counter at two digits
    int first_over_max = 40;
    double wide_rate = 0.06;
    double wicket_rate = 0.04;
};

Scenario random_cricket_scenario(std::uint64_t seed, const CricketOptions& options = {});

struct ClockOptions {
    std::size_t events = 30;
    std::int64_t min_frames = 20;
    std::int64_t max_frames = 60;
    int max_step_s = 8;
};

/// Clock sport script: labels from the profile taxonomy, commentary text built
/// from each label's first trigger.
Scenario random_clock_scenario(const SportProfile& profile, std::uint64_t seed, const ClockOptions& options = {});

/// Occlusions covering about `fraction` of each interval, never its first
/// frame (a state whose every frame is hidden cannot be recovered).
std::vector<Occlusion> occlusion_schedule(const Scenario& sc, double fraction, std::uint64_t seed);

/// Mid-interval timestamps of the truth events, usable as verification marks.
std::vector<TimestampMark> truth_marks(const GroundTruth& truth, double fps);

Scenario scenario_from_json(std::string_view text, const SportProfile& profile);
std::string scenario_to_json(const Scenario& sc);

}  // namespace asap::synth
