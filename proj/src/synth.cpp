#include "asap/synth.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "asap/errors.hpp"
#include "asap/glyph_font.hpp"
#include "asap/parallel.hpp"
#include "asap/png_io.hpp"
#include "asap/rng.hpp"
#include "asap/serialization.hpp"

namespace asap::synth {
namespace {

using nlohmann::json;

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint8_t clamp_u8(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

Roi panel_box(const Scenario& sc, const std::string& text) {
    return {sc.panel_x, sc.panel_y, font::text_width(text, sc.scale) + 2 * kTextInset,
            font::text_height(sc.scale) + 2 * kTextInset};
}

Roi overlay_box(const Scenario& sc, const Roi& panel) { return expand(panel, 8, sc.width, sc.height); }

Raster background(const Scenario& sc) {
    Raster bg(sc.height, sc.width);
    const int span = 2 * sc.noise_amplitude + 1;
    for (int y = 0; y < sc.height; ++y) {
        for (int x = 0; x < sc.width; ++x) {
            const std::uint64_t h = mix(sc.seed ^ mix(static_cast<std::uint64_t>(y) * 65537u + x));
            bg(y, x) = clamp_u8(kBackgroundLevel + static_cast<int>(h % span) - sc.noise_amplitude);
        }
    }
    if (sc.banner) {
        const int y = sc.height - font::text_height(sc.scale) - 2 * kTextInset - 4;
        const Roi box{sc.panel_x, y, font::text_width(*sc.banner, sc.scale) + 2 * kTextInset,
                      font::text_height(sc.scale) + 2 * kTextInset};
        bg.block(box.y, box.x, box.h, box.w).setConstant(kPanelLevel);
        font::draw_text(bg, *sc.banner, box.x + kTextInset, box.y + kTextInset, sc.scale, kInkLevel);
    }
    return bg;
}

const Occlusion* occlusion_at(const Scenario& sc, std::int64_t frame) {
    for (const auto& o : sc.occlusions) {
        if (frame >= o.start && frame <= o.end) return &o;
    }
    return nullptr;
}

Raster render_over(Raster canvas, const MatchState& state, const Scenario& sc, std::int64_t frame) {
    const std::string text = scoreboard_text(sc, state);
    const Roi panel = panel_box(sc, text);
    canvas.block(panel.y, panel.x, panel.h, panel.w).setConstant(kPanelLevel);
    font::draw_text(canvas, text, panel.x + kTextInset, panel.y + kTextInset, sc.scale, kInkLevel);

    // One-level sensor jitter inside the panel, varying per frame.
    const std::uint64_t frame_key = mix(sc.seed ^ mix(0x5eed0000ULL + static_cast<std::uint64_t>(frame)));
    for (int y = panel.y; y < panel.y + panel.h; ++y) {
        for (int x = panel.x; x < panel.x + panel.w; ++x) {
            const auto h = mix(frame_key ^ (static_cast<std::uint64_t>(y) << 20 | static_cast<std::uint64_t>(x)));
            canvas(y, x) = clamp_u8(canvas(y, x) + static_cast<int>(h % 3) - 1);
        }
    }

    if (const auto* occ = occlusion_at(sc, frame)) {
        const Roi box = overlay_box(sc, panel);
        auto block = canvas.block(box.y, box.x, box.h, box.w);
        if (occ->style == OverlayStyle::flat) {
            block.setConstant(kOverlayLevel);
        } else {
            for (int r = 0; r < box.h; ++r) block.row(r).setConstant((r / 6) % 2 == 0 ? kOverlayLevel : 20);
        }
    }
    return canvas;
}

std::vector<std::size_t> frame_map(const Scenario& sc) {
    std::vector<std::size_t> map;
    map.reserve(static_cast<std::size_t>(sc.frame_count()));
    for (std::size_t i = 0; i < sc.script.size(); ++i) map.insert(map.end(), static_cast<std::size_t>(sc.script[i].frames), i);
    return map;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

AtomicEvent draw_runs(std::mt19937_64& rng) {
    // Relative frequencies for 0..9 runs.
    static constexpr int kWeights[10] = {30, 30, 10, 3, 12, 1, 6, 1, 1, 1};
    int total = 0;
    for (int w : kWeights) total += w;
    auto pick = uniform_int(rng, 0, total - 1);
    for (int n = 0; n < 10; ++n) {
        if (pick < kWeights[n]) return Runs{n};
        pick -= kWeights[n];
    }
    return Runs{0};
}

std::string cricket_text(const AtomicEvent& e, std::mt19937_64& rng) {
    static constexpr const char* kLines[] = {"full and straight", "short of a length", "wide of off stump",
                                             "on the pads", "good length, outside off"};
    return std::string(kLines[uniform_int(rng, 0, 4)]) + ", " + event_label(e);
}

}  // namespace

std::int64_t Scenario::frame_count() const {
    std::int64_t n = 0;
    for (const auto& e : script) n += e.frames;
    return n;
}

std::string scoreboard_text(const Scenario& sc, const MatchState& state) { return sc.prefix + format_state(state); }

Roi scenario_roi(const Scenario& sc) {
    if (sc.script.empty()) throw Error("scenario has an empty script");
    const std::string text = scoreboard_text(sc, sc.script.front().state);
    return {sc.panel_x + kTextInset - kRoiMargin, sc.panel_y + kTextInset - kRoiMargin,
            font::text_width(text, sc.scale) + 2 * kRoiMargin, font::text_height(sc.scale) + 2 * kRoiMargin};
}

void validate(const Scenario& sc) {
    if (sc.script.empty()) throw Error("scenario has an empty script");
    if (sc.fps <= 0) throw Error("scenario fps must be positive");
    if (sc.scale < 1) throw Error("glyph scale must be positive");
    if (sc.noise_amplitude < 0 || kBackgroundLevel + sc.noise_amplitude >= 128) {
        throw Error("noise amplitude must keep the background below the ink threshold");
    }
    for (const auto& e : sc.script) {
        if (e.frames < 1) throw Error("script event durations must be >= 1 frame");
        const Roi panel = panel_box(sc, scoreboard_text(sc, e.state));
        if (!panel.fits(sc.width, sc.height)) throw Error("scorecard panel does not fit the frame");
    }
    const auto n = sc.frame_count();
    for (const auto& o : sc.occlusions) {
        if (o.start < 0 || o.end < o.start || o.end >= n) throw Error("occlusion range outside the sequence");
    }
}

Raster render_frame(const MatchState& state, const Scenario& sc, std::int64_t frame_index) {
    return render_over(background(sc), state, sc, frame_index);
}

SyntheticFrameSource::SyntheticFrameSource(Scenario scenario)
    : scenario_(std::move(scenario)),
      state_of_frame_((validate(scenario_), frame_map(scenario_))),
      background_(background(scenario_)) {}

Raster SyntheticFrameSource::pixels(std::int64_t index) const {
    if (index < 0 || index >= size()) throw Error("frame index out of range");
    const auto& ev = scenario_.script[state_of_frame_[static_cast<std::size_t>(index)]];
    return render_over(background_, ev.state, scenario_, index);
}

GroundTruth ground_truth(const Scenario& sc) {
    const auto& profile = ProfileRegistry::builtin().get(sc.sport);
    GroundTruth truth;
    truth.commentary.sport = sc.sport;
    truth.commentary.match_id = sc.match_id;

    std::vector<std::size_t> interval_of(sc.script.size());
    std::int64_t frame = 0;
    for (std::size_t i = 0; i < sc.script.size(); ++i) {
        const auto& ev = sc.script[i];
        if (!truth.intervals.empty() && truth.intervals.back().state == ev.state) {
            truth.intervals.back().frame_end = frame + ev.frames - 1;
        } else {
            truth.intervals.push_back({ev.state, frame, frame + ev.frames - 1});
        }
        interval_of[i] = truth.intervals.size() - 1;
        frame += ev.frames;

        CommentaryEntry entry{ev.state, ev.text, std::nullopt, Confidence::normal};
        if (profile.is_cricket()) entry.event = ev.event;
        truth.commentary.entries.push_back(std::move(entry));
    }

    const auto adjusted = adjust_timestamps(truth.commentary.entries, profile);
    for (std::size_t i = 0; i < sc.script.size(); ++i) {
        const auto& ev = sc.script[i];
        AlignedEvent a{ev.event, truth.intervals[interval_of[i]], std::nullopt, adjusted[i].confidence};
        if (!ev.text.empty()) a.text = ev.text;
        truth.events.push_back(std::move(a));
    }
    return truth;
}

std::vector<TimestampMark> truth_marks(const GroundTruth& truth, double fps) {
    std::vector<TimestampMark> marks;
    for (const auto& e : truth.events) {
        marks.push_back({e.event, (event_start_ms(e.interval, fps) + event_end_ms(e.interval, fps)) / 2});
    }
    return marks;
}

GroundTruth generate_match(const Scenario& sc, const std::filesystem::path& out_dir, int workers) {
    const SyntheticFrameSource source(sc);
    const auto frames_dir = out_dir / "frames";
    std::error_code ec;
    std::filesystem::create_directories(frames_dir, ec);
    if (ec) throw IoError("cannot create " + frames_dir.string() + ": " + ec.message());

    parallel_for(static_cast<std::size_t>(source.size()), workers, [&](std::size_t i) {
        const auto idx = static_cast<std::int64_t>(i);
        write_png(frames_dir / frame_file_name(idx), source.pixels(idx));
    });
    write_frame_manifest(frames_dir, {sc.fps, source.size(), sc.width, sc.height});

    auto truth = ground_truth(sc);
    write_text_file(out_dir / "truth_intervals.jsonl", intervals_to_jsonl(truth.intervals));
    write_text_file(out_dir / "truth_events.jsonl", aligned_to_jsonl(truth.events, sc.fps));
    write_text_file(out_dir / "truth_marks.jsonl", marks_to_jsonl(truth_marks(truth, sc.fps)));
    write_text_file(out_dir / "commentary.json", dump_commentary(truth.commentary));
    write_text_file(out_dir / "scenario.json", scenario_to_json(sc));
    return truth;
}

Scenario random_cricket_scenario(std::uint64_t seed, const CricketOptions& options) {
    if (options.min_frames < 1 || options.max_frames < options.min_frames) throw Error("bad frame duration range");
    std::mt19937_64 rng(seed);
    Scenario sc;
    sc.seed = seed;
    sc.match_id = "synth-" + std::to_string(seed);
    sc.banner = "LIVE";
    OverBall ob{static_cast<int>(uniform_int(rng, options.first_over_min, options.first_over_max)), 1};
    std::size_t legal = 0;
    while (legal < options.deliveries) {
        const double u = unit(rng);
        AtomicEvent event = u < options.wide_rate                          ? AtomicEvent{Wide{}}
                            : u < options.wide_rate + options.wicket_rate ? AtomicEvent{Wicket{}}
                                                                            : draw_runs(rng);
        const auto frames = uniform_int(rng, options.min_frames, options.max_frames);
        sc.script.push_back({ob, event, frames, cricket_text(event, rng)});
        if (std::holds_alternative<Wide>(event)) continue;
        ++legal;
        ob = std::get<OverBall>(state_successor(ob));
    }
    return sc;
}

Scenario random_clock_scenario(const SportProfile& profile, std::uint64_t seed, const ClockOptions& options) {
    if (profile.is_cricket()) throw UnsupportedError("random_clock_scenario needs a clock profile");
    std::mt19937_64 rng(seed);

    // Labels whose first working trigger classifies back to the label.
    std::vector<std::pair<std::string, std::string>> phrases;
    for (const auto& rule : profile.keywords) {
        for (const auto& trigger : rule.triggers) {
            const auto back = classify_event(trigger, profile);
            if (back && std::get<PlayLabel>(*back).name == rule.label) {
                phrases.emplace_back(rule.label, trigger);
                break;
            }
        }
    }
    if (phrases.empty()) throw Error("profile '" + profile.sport + "' has no usable keyword triggers");

    Scenario sc;
    sc.sport = profile.sport;
    sc.seed = seed;
    sc.match_id = "synth-" + profile.sport + "-" + std::to_string(seed);
    sc.prefix = "TIME ";
    sc.banner = "LIVE";

    const bool down = profile.clock_direction == ClockDirection::counts_down;
    const int period_minutes = profile.sport == "basketball" ? 12 : 15;
    GameClock clock{down ? std::optional<int>(1) : std::nullopt, down ? period_minutes : 0, 0,
                    profile.clock_direction};
    for (std::size_t i = 0; i < options.events; ++i) {
        const int step = static_cast<int>(uniform_int(rng, 1, options.max_step_s));
        int total = clock.minutes * 60 + clock.seconds + (down ? -step : step);
        if (total < 0) {
            clock.period = clock.period.value_or(1) + 1;
            total = period_minutes * 60 - step;
        }
        clock.minutes = total / 60;
        clock.seconds = total % 60;

        const auto& [label, trigger] = phrases[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(phrases.size()) - 1))];
        std::string text = trigger + " by player " + std::to_string(uniform_int(rng, 1, 99));
        text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
        sc.script.push_back({clock, PlayLabel{label}, uniform_int(rng, options.min_frames, options.max_frames), text});
    }
    return sc;
}

std::vector<Occlusion> occlusion_schedule(const Scenario& sc, double fraction, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Occlusion> out;
    for (const auto& iv : ground_truth(sc).intervals) {
        const std::int64_t len = iv.frame_end - iv.frame_start + 1;
        const auto run = std::min<std::int64_t>(len - 1, std::llround(fraction * static_cast<double>(len)));
        if (run < 1) continue;
        const auto offset = uniform_int(rng, 1, len - run);
        const auto style = uniform_int(rng, 0, 1) == 0 ? OverlayStyle::flat : OverlayStyle::stripes;
        out.push_back({iv.frame_start + offset, iv.frame_start + offset + run - 1, style});
    }
    return out;
}

Scenario scenario_from_json(std::string_view text, const SportProfile& profile) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    Scenario sc;
    try {
        sc.sport = j.value("sport", profile.sport);
        if (sc.sport != profile.sport) throw SchemaError("/sport", "does not match profile '" + profile.sport + "'");
        sc.match_id = j.value("match_id", sc.match_id);
        sc.fps = j.value("fps", sc.fps);
        sc.width = j.value("width", sc.width);
        sc.height = j.value("height", sc.height);
        if (j.contains("panel")) {
            sc.panel_x = j["panel"].value("x", sc.panel_x);
            sc.panel_y = j["panel"].value("y", sc.panel_y);
        }
        sc.scale = j.value("scale", sc.scale);
        sc.prefix = j.value("prefix", profile.is_cricket() ? sc.prefix : std::string("TIME "));
        if (j.contains("banner") && !j["banner"].is_null()) sc.banner = j["banner"].get<std::string>();
        sc.noise_amplitude = j.value("noise_amplitude", sc.noise_amplitude);
        sc.seed = j.value("seed", sc.seed);
        const auto& script = j.at("script");
        for (std::size_t i = 0; i < script.size(); ++i) {
            const auto& item = script[i];
            const std::string path = "/script/" + std::to_string(i);
            ScriptEvent ev{parse_match_state(item.at("state").get<std::string>(), profile),
                           event_from_label(item.at("event").get<std::string>()), item.value("frames", 30),
                           item.value("text", std::string())};
            if (profile.is_cricket() != is_cricket_event(ev.event)) throw SchemaError(path + "/event", "wrong sport");
            sc.script.push_back(std::move(ev));
        }
        if (j.contains("occlusions")) {
            for (const auto& item : j["occlusions"]) {
                const std::string style = item.value("style", std::string("flat"));
                if (style != "flat" && style != "stripes") throw SchemaError("/occlusions", "unknown style " + style);
                sc.occlusions.push_back({item.at("start").get<std::int64_t>(), item.at("end").get<std::int64_t>(),
                                         style == "flat" ? OverlayStyle::flat : OverlayStyle::stripes});
            }
        }
    } catch (const json::exception& e) {
        throw SchemaError("", e.what());
    } catch (const ParseError& e) {
        throw SchemaError("/script", e.what());
    }
    validate(sc);
    return sc;
}

std::string scenario_to_json(const Scenario& sc) {
    json j{{"sport", sc.sport},
           {"match_id", sc.match_id},
           {"fps", sc.fps},
           {"width", sc.width},
           {"height", sc.height},
           {"panel", {{"x", sc.panel_x}, {"y", sc.panel_y}}},
           {"scale", sc.scale},
           {"prefix", sc.prefix},
           {"banner", sc.banner ? json(*sc.banner) : json(nullptr)},
           {"noise_amplitude", sc.noise_amplitude},
           {"seed", sc.seed},
           {"script", json::array()},
           {"occlusions", json::array()}};
    for (const auto& ev : sc.script) {
        j["script"].push_back(
            {{"state", format_state(ev.state)}, {"event", event_label(ev.event)}, {"frames", ev.frames}, {"text", ev.text}});
    }
    for (const auto& o : sc.occlusions) {
        j["occlusions"].push_back(
            {{"start", o.start}, {"end", o.end}, {"style", o.style == OverlayStyle::flat ? "flat" : "stripes"}});
    }
    return j.dump(2) + "\n";
}

}  // namespace asap::synth
