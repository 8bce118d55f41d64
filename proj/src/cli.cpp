#include "asap/cli.hpp"

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "asap/aligner.hpp"
#include "asap/commentary.hpp"
#include "asap/dataset.hpp"
#include "asap/errors.hpp"
#include "asap/extractor.hpp"
#include "asap/locator.hpp"
#include "asap/ocr.hpp"
#include "asap/parallel.hpp"
#include "asap/png_io.hpp"
#include "asap/query.hpp"
#include "asap/rng.hpp"
#include "asap/serialization.hpp"
#include "asap/synth.hpp"

namespace asap::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// JSON config files. Top-level keys reach every subcommand that defines an
// option of that name; an object keyed by a subcommand name targets it alone.
class JsonConfig final : public CLI::Config {
public:
    explicit JsonConfig(const CLI::App* root) : root_(root) {}

    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json doc;
        try {
            input >> doc;
        } catch (const json::exception& e) {
            throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
        std::vector<CLI::ConfigItem> items;
        walk(doc, root_, {}, items);
        return items;
    }

private:
    static std::vector<std::string> inputs_of(const json& value) {
        std::vector<std::string> out;
        const auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
        if (value.is_array()) {
            for (const auto& v : value) out.push_back(scalar(v));
        } else {
            out.push_back(scalar(value));
        }
        return out;
    }

    static void broadcast(const std::string& key, const json& value, const CLI::App* app,
                          std::vector<std::string> parents, std::vector<CLI::ConfigItem>& items) {
        if (app->get_option_no_throw("--" + key) != nullptr) items.push_back({parents, key, inputs_of(value)});
        for (const auto* sub : app->get_subcommands({})) {
            auto next = parents;
            next.push_back(sub->get_name());
            broadcast(key, value, sub, next, items);
        }
    }

    static void walk(const json& obj, const CLI::App* app, const std::vector<std::string>& parents,
                     std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : obj.items()) {
            const CLI::App* sub = nullptr;
            for (const auto* s : app->get_subcommands({})) {
                if (s->get_name() == key) sub = s;
            }
            if (value.is_object() && sub != nullptr) {
                auto next = parents;
                next.push_back(key);
                walk(value, sub, next, items);
            } else {
                broadcast(key, value, app, parents, items);
            }
        }
    }

    const CLI::App* root_;
};

struct OcrFlags {
    std::string backend = "remote";
    std::string endpoint;
    std::string key_env = "ASAP_OCR_API_KEY";
    int max_in_flight = 4;
    int max_attempts = 4;
    int mock_scale = 2;
    double mock_corruption = 0.0;
    std::uint64_t mock_seed = 0;
};

struct LocateFlags {
    std::int64_t samples = 32;
    std::int64_t max_samples = 128;
    double iou = 0.5;
    int margin = 4;
    double min_score = 0.6;
};

struct Settings {
    int workers = default_workers();
    std::string profile;
    std::string frames;
    std::string out = "out";
    std::string commentary;
    std::string intervals;
    double fps = 0.0;
    std::string roi;
    std::string reference;
    std::string locator;
    std::string dedup = "last-accepted";
    OcrFlags ocr;
    LocateFlags locate;
    ExtractionConfig extract;

    std::string aligned;
    std::string marks;
    std::string match_id;
    int overs = 10;
    std::string matches;
    std::uint64_t seed = 0;
    std::string clips;
    double fps_target = 0.1;

    std::size_t n = 100;
    std::size_t counting = 0;
    bool regression = false;
    int clip_overs = 10;
    std::string set;
    std::string chains;
    double lo = 0.45;
    double hi = 0.55;
    std::string balance_mode = "per-query";

    std::string scenario;
    std::size_t events = 30;
    double occlusion = 0.0;
};

const SportProfile& require_profile(const Settings& s) {
    if (s.profile.empty()) throw UsageError("--profile is required");
    if (!ProfileRegistry::builtin().contains(s.profile)) {
        std::string known;
        for (const auto& n : ProfileRegistry::builtin().names()) known += (known.empty() ? "" : ", ") + n;
        throw UsageError("unknown --profile '" + s.profile + "' (known: " + known + ")");
    }
    return ProfileRegistry::builtin().get(s.profile);
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

Roi parse_roi(const std::string& text) {
    Roi r;
    if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &r.x, &r.y, &r.w, &r.h) != 4) {
        throw UsageError("--roi expects x,y,w,h, got '" + text + "'");
    }
    return r;
}

std::string roi_text(const Roi& r) {
    return std::to_string(r.x) + "," + std::to_string(r.y) + "," + std::to_string(r.w) + "," + std::to_string(r.h);
}

std::unique_ptr<Recognizer> make_recognizer(const OcrFlags& f, int scale_hint) {
    if (f.backend == "mock") {
        return std::make_unique<MockRecognizer>(
            MockOcrOptions{f.mock_scale > 0 ? f.mock_scale : scale_hint, 128, f.mock_corruption, f.mock_seed});
    }
    if (f.backend != "remote") throw UsageError("--ocr must be mock or remote");
    if (f.endpoint.empty()) throw UsageError("--ocr-endpoint is required with --ocr remote");
    RemoteOcrConfig cfg;
    cfg.endpoint = f.endpoint;
    cfg.api_key_env = f.key_env;
    cfg.max_in_flight = f.max_in_flight;
    cfg.max_attempts = f.max_attempts;
    return std::make_unique<RemoteRecognizer>(cfg, std::shared_ptr<HttpTransport>(make_http_transport()));
}

// Effective settings of the invoked subcommand, written next to its outputs.
void echo_config(const CLI::App* sub, const fs::path& out_dir, int workers) {
    json doc = json::object();
    for (const auto* opt : sub->get_options()) {
        if (opt->get_lnames().empty()) continue;
        const std::string& name = opt->get_lnames().front();
        if (name == "help" || name == "config") continue;
        const auto results = opt->results();
        doc[name] = results.empty() ? opt->get_default_str() : CLI::detail::join(results, " ");
    }
    doc["workers"] = workers;
    write_text_file(out_dir / "effective_config.json", doc.dump(2) + "\n");
}

struct Located {
    Roi roi;
    Raster reference;
};

Located run_locate(const Settings& s, const FrameSource& frames, const SportProfile& profile, Recognizer& recognizer,
                   const fs::path& out_dir) {
    const auto result = locate_in_source(frames, recognizer, profile, s.locate.samples, s.locate.max_samples,
                                         {s.locate.iou, s.locate.margin, s.locate.min_score, s.workers});
    fs::create_directories(out_dir);
    write_png(out_dir / "reference.png", result.reference);
    write_text_file(out_dir / "locator.json", locator_report_json(result, "reference.png") + "\n");
    std::cerr << "scorecard roi " << roi_text(result.roi) << " (reference frame " << result.reference_frame << ")\n";
    return {result.roi, result.reference};
}

Located load_located(const Settings& s) {
    if (!s.locator.empty()) {
        const auto doc = json::parse(read_text_file(s.locator));
        const auto& r = doc.at("roi");
        Located out{{r.at("x").get<int>(), r.at("y").get<int>(), r.at("w").get<int>(), r.at("h").get<int>()}, {}};
        out.reference = read_png(fs::path(s.locator).parent_path() / doc.at("reference_path").get<std::string>());
        return out;
    }
    if (s.roi.empty() || s.reference.empty()) throw UsageError("give --locator, or both --roi and --reference");
    return {parse_roi(s.roi), read_png(s.reference)};
}

ExtractionResult run_extract(Settings s, const FrameSource& frames, const SportProfile& profile,
                             Recognizer& recognizer, const fs::path& out_dir) {
    const bool have_location = !s.locator.empty() || !s.roi.empty() || !s.reference.empty();
    const Located located = have_location ? load_located(s) : run_locate(s, frames, profile, recognizer, out_dir);
    if (s.dedup == "consecutive") {
        s.extract.dedup = DedupMode::consecutive;
    } else if (s.dedup != "last-accepted") {
        throw UsageError("--dedup must be last-accepted or consecutive");
    }
    s.extract.workers = s.workers;
    auto result = extract_intervals(frames, located.roi, located.reference, recognizer, profile, s.extract);
    fs::create_directories(out_dir);
    write_text_file(out_dir / "intervals.jsonl", intervals_to_jsonl(result.intervals));
    write_text_file(out_dir / "observations.csv", observations_to_csv(result.observations));
    std::string log;
    for (const auto& line : result.log) log += line + "\n";
    write_text_file(out_dir / "extraction_log.txt", log);
    const auto& st = result.stats;
    write_text_file(out_dir / "extraction_stats.json",
                    json{{"recognize_calls", st.recognize_calls},
                         {"candidates", st.candidates},
                         {"rejected", st.rejected},
                         {"skipped", st.skipped},
                         {"demoted", st.demoted},
                         {"reread_frames", st.reread_frames},
                         {"intervals", result.intervals.size()}}
                            .dump(2) +
                        "\n");
    std::cerr << result.intervals.size() << " intervals, " << st.recognize_calls << " OCR calls, " << st.rejected
              << " rejected frames\n";
    return result;
}

int cmd_locate(const Settings& s, const CLI::App* sub) {
    const auto& profile = require_profile(s);
    require(s.frames, "--frames");
    const DirectoryFrameSource frames(s.frames);
    auto recognizer = make_recognizer(s.ocr, 2);
    run_locate(s, frames, profile, *recognizer, s.out);
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_extract(const Settings& s, const CLI::App* sub) {
    const auto& profile = require_profile(s);
    require(s.frames, "--frames");
    const DirectoryFrameSource frames(s.frames);
    auto recognizer = make_recognizer(s.ocr, 2);
    run_extract(s, frames, profile, *recognizer, s.out);
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_align(const Settings& s, const CLI::App* sub) {
    const auto& profile = require_profile(s);
    require(s.commentary, "--commentary");
    std::vector<StateInterval> intervals;
    double fps = s.fps;
    if (!s.intervals.empty()) {
        if (fps <= 0 && !s.frames.empty()) fps = read_frame_manifest(s.frames).fps;
        if (fps <= 0) throw UsageError("--fps (or --frames for its manifest) is required with --intervals");
        intervals = intervals_from_jsonl(read_text_file(s.intervals), profile);
    } else {
        require(s.frames, "--frames or --intervals");
        const DirectoryFrameSource frames(s.frames);
        fps = frames.fps();
        auto recognizer = make_recognizer(s.ocr, 2);
        intervals = run_extract(s, frames, profile, *recognizer, s.out).intervals;
    }

    const auto doc = load_commentary(read_text_file(s.commentary), profile);
    const auto entries = adjust_timestamps(doc.entries, profile);
    const auto alignment = align(intervals, entries, profile);

    fs::create_directories(s.out);
    write_text_file(fs::path(s.out) / "aligned.jsonl", aligned_to_jsonl(alignment.events, fps));
    write_text_file(fs::path(s.out) / "aligned.srt", to_srt(alignment.events, fps));
    json report{{"aligned", alignment.events.size()},
                {"ambiguous", alignment.ambiguous},
                {"unmatched_entries", json::array()},
                {"unclassified_entries", json::array()},
                {"unmatched_intervals", json::array()}};
    for (const auto& e : alignment.unmatched_entries) {
        report["unmatched_entries"].push_back({{"state", format_state(e.state)}, {"text", e.text}});
    }
    for (const auto& e : alignment.unclassified) {
        report["unclassified_entries"].push_back({{"state", format_state(e.state)}, {"text", e.text}});
    }
    for (const auto& iv : alignment.unmatched_intervals) {
        report["unmatched_intervals"].push_back(
            {{"state", format_state(iv.state)}, {"frame_start", iv.frame_start}, {"frame_end", iv.frame_end}});
    }
    write_text_file(fs::path(s.out) / "alignment_report.json", report.dump(2) + "\n");
    std::cerr << alignment.events.size() << " events aligned, " << alignment.unmatched_entries.size()
              << " entries unmatched, " << alignment.unmatched_intervals.size() << " intervals without commentary\n";
    echo_config(sub, s.out, s.workers);
    return 0;
}

json clip_json(const Clip& clip, std::size_t index) {
    std::vector<Token> tokens;
    for (const auto& e : clip.events) {
        if (const auto t = event_token(e.event)) tokens.push_back(*t);
    }
    return {{"id", (clip.match_id.empty() ? std::string("clip") : clip.match_id) + "-" + std::to_string(index)},
            {"match_id", clip.match_id},
            {"frame_start", clip.frame_start},
            {"frame_end", clip.frame_end},
            {"first_over", clip.first_over},
            {"last_over", clip.last_over},
            {"event_count", clip.events.size()},
            {"total_runs", total_runs(tokens)},
            {"tokens", format_tokens(tokens)}};
}

int cmd_segment(const Settings& s, const CLI::App* sub) {
    const auto& profile = require_profile(s);
    require(s.aligned, "--aligned");
    const auto events = aligned_from_jsonl(read_text_file(s.aligned), profile);
    const auto clips = segment_clips(events, s.overs, s.match_id);
    json doc{{"match_id", s.match_id}, {"overs_per_clip", s.overs}, {"clips", json::array()}};
    for (std::size_t i = 0; i < clips.size(); ++i) doc["clips"].push_back(clip_json(clips[i], i));
    fs::create_directories(s.out);
    write_text_file(fs::path(s.out) / "clips.json", doc.dump(2) + "\n");
    std::cerr << clips.size() << " clips of " << s.overs << " overs\n";
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_split(const Settings& s, const CLI::App* sub) {
    require(s.matches, "--matches");
    auto doc = json::parse(read_text_file(s.matches));
    if (doc.is_object()) doc = doc.at("matches");
    std::vector<MatchHours> matches;
    for (const auto& m : doc) matches.push_back({m.at("id").get<std::string>(), m.at("hours").get<double>()});
    const auto split = split_dataset(matches, s.seed);
    const json out{{"train", split.train}, {"val", split.val}, {"test", split.test}, {"hours", split.hours}};
    fs::create_directories(s.out);
    write_text_file(fs::path(s.out) / "splits.json", out.dump(2) + "\n");
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_export(const Settings& s, const CLI::App* sub) {
    require(s.frames, "--frames");
    require(s.clips, "--clips");
    const DirectoryFrameSource frames(s.frames);
    const Roi roi = !s.roi.empty() ? parse_roi(s.roi) : load_located(s).roi;
    const auto doc = json::parse(read_text_file(s.clips));
    std::size_t written = 0;
    for (const auto& c : doc.at("clips")) {
        Clip clip;
        clip.match_id = c.value("match_id", std::string());
        clip.frame_start = c.at("frame_start").get<std::int64_t>();
        clip.frame_end = c.at("frame_end").get<std::int64_t>();
        const auto id = c.at("id").get<std::string>();
        written += export_clip_frames(clip, roi, frames, s.fps_target, fs::path(s.out) / id, s.workers).files.size();
    }
    std::cerr << written << " frames exported\n";
    echo_config(sub, s.out, s.workers);
    return 0;
}

struct QueryItem {
    std::string text;
    std::string kind;
};

std::vector<QueryItem> load_query_set(const std::string& path, int* clip_overs) {
    const auto doc = json::parse(read_text_file(path));
    if (clip_overs) *clip_overs = doc.value("clip_overs", 0);
    std::vector<QueryItem> out;
    for (const auto& q : doc.at("queries")) {
        out.push_back({q.at("text").get<std::string>(), q.value("kind", std::string("binary"))});
    }
    return out;
}

void write_query_set(const fs::path& path, int clip_overs, const std::vector<QueryItem>& items) {
    json doc{{"clip_overs", clip_overs}, {"queries", json::array()}};
    for (const auto& q : items) doc["queries"].push_back({{"text", q.text}, {"kind", q.kind}});
    write_text_file(path, doc.dump(2) + "\n");
}

std::vector<std::pair<std::string, TokenChain>> load_chains(const std::string& path) {
    const auto doc = json::parse(read_text_file(path));
    const auto& list = doc.contains("chains") ? doc.at("chains") : doc.at("clips");
    std::vector<std::pair<std::string, TokenChain>> out;
    for (const auto& c : list) out.emplace_back(c.at("id").get<std::string>(), parse_tokens(c.at("tokens").get<std::string>()));
    if (out.empty()) throw EmptyCorpusError("no chains in " + path);
    return out;
}

std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

int cmd_queries_gen(const Settings& s, const CLI::App* sub) {
    std::vector<QueryItem> items;
    for (const auto& q : generate_query_set(s.n, s.seed)) items.push_back({format_query(q), "binary"});
    std::mt19937_64 rng(s.seed ^ 0xc0ffeeULL);
    for (std::size_t i = 0; i < s.counting; ++i) {
        CountingQuery q;
        const auto len = uniform_int(rng, 1, 3);
        for (std::int64_t k = 0; k < len; ++k) q.pattern.push_back(static_cast<Token>(uniform_int(rng, 0, kTokenCount - 1)));
        items.push_back({format_counting_query(q), "counting"});
    }
    if (s.regression) items.push_back({"total runs", "regression"});
    fs::create_directories(s.out);
    write_query_set(fs::path(s.out) / "queries.json", s.clip_overs, items);
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_queries_eval(const Settings& s, const CLI::App* sub) {
    require(s.set, "--set");
    require(s.chains, "--chains");
    const auto items = load_query_set(s.set, nullptr);
    const auto chains = load_chains(s.chains);
    std::string csv = "query,chain_id,answer\n";
    for (const auto& q : items) {
        for (const auto& [id, tokens] : chains) {
            std::string answer;
            if (q.kind == "binary") {
                answer = eval_binary(parse_query(q.text), tokens) ? "true" : "false";
            } else if (q.kind == "counting") {
                answer = std::to_string(count_pattern(tokens, parse_counting_query(q.text).pattern));
            } else if (q.kind == "regression") {
                answer = std::to_string(total_runs(tokens));
            } else {
                throw SchemaError("/queries", "unknown query kind '" + q.kind + "'");
            }
            csv += csv_field(q.text) + "," + csv_field(id) + "," + answer + "\n";
        }
    }
    fs::create_directories(s.out);
    write_text_file(fs::path(s.out) / "query_report.csv", csv);
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_queries_balance(const Settings& s, const CLI::App* sub) {
    require(s.set, "--set");
    require(s.chains, "--chains");
    int clip_overs = 0;
    const auto items = load_query_set(s.set, &clip_overs);
    std::vector<TokenChain> corpus;
    for (auto& [id, tokens] : load_chains(s.chains)) corpus.push_back(std::move(tokens));

    std::vector<BinaryQuery> binary;
    std::vector<QueryItem> others;
    for (const auto& q : items) {
        if (q.kind == "binary") {
            binary.push_back(parse_query(q.text));
        } else {
            others.push_back(q);
        }
    }
    std::vector<BinaryQuery> kept;
    if (s.balance_mode == "per-query") {
        kept = filter_balanced(binary, corpus, s.lo, s.hi);
    } else if (s.balance_mode == "set-average") {
        kept = filter_balanced_average(binary, corpus, s.lo, s.hi);
    } else {
        throw UsageError("--mode must be per-query or set-average");
    }
    std::vector<QueryItem> out;
    for (const auto& q : kept) out.push_back({format_query(q), "binary"});
    out.insert(out.end(), others.begin(), others.end());
    fs::create_directories(s.out);
    write_query_set(fs::path(s.out) / "balanced_queries.json", clip_overs, out);
    std::cerr << kept.size() << " of " << binary.size() << " binary queries kept\n";
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_verify(const Settings& s, const CLI::App* sub) {
    const auto& profile = require_profile(s);
    require(s.aligned, "--aligned");
    require(s.marks, "--marks");
    if (s.fps <= 0) throw UsageError("--fps is required");
    const auto predicted = aligned_from_jsonl(read_text_file(s.aligned), profile);
    const auto marks = marks_from_jsonl(read_text_file(s.marks));
    const auto v = verify_alignment(predicted, marks, profile, s.fps);
    json doc{{"accuracy", v.accuracy}, {"correct", v.correct}};
    fs::create_directories(s.out);
    write_text_file(fs::path(s.out) / "verification.json", doc.dump(2) + "\n");
    std::cout << "accuracy " << v.accuracy << "\n";
    echo_config(sub, s.out, s.workers);
    return 0;
}

int cmd_synth(const Settings& s, const CLI::App* sub) {
    synth::Scenario sc;
    if (!s.scenario.empty()) {
        const auto text = read_text_file(s.scenario);
        const auto sport = json::parse(text).value("sport", s.profile.empty() ? std::string("cricket") : s.profile);
        if (!ProfileRegistry::builtin().contains(sport)) throw UsageError("scenario names unknown sport '" + sport + "'");
        sc = synth::scenario_from_json(text, ProfileRegistry::builtin().get(sport));
    } else {
        const auto& profile = require_profile(s);
        if (profile.is_cricket()) {
            synth::CricketOptions opts;
            opts.deliveries = s.events;
            sc = synth::random_cricket_scenario(s.seed, opts);
        } else {
            synth::ClockOptions opts;
            opts.events = s.events;
            sc = synth::random_clock_scenario(profile, s.seed, opts);
        }
        if (s.occlusion > 0) sc.occlusions = synth::occlusion_schedule(sc, s.occlusion, s.seed);
    }
    const auto truth = synth::generate_match(sc, s.out, s.workers);
    std::cerr << sc.frame_count() << " frames, " << truth.events.size() << " events written to " << s.out << "\n";
    echo_config(sub, s.out, s.workers);
    return 0;
}

void add_ocr_flags(CLI::App* app, Settings& s) {
    app->add_option("--ocr", s.ocr.backend, "OCR backend: remote or mock");
    app->add_option("--ocr-endpoint", s.ocr.endpoint, "Remote OCR endpoint URL");
    app->add_option("--ocr-key-env", s.ocr.key_env, "Environment variable holding the OCR API key");
    app->add_option("--max-in-flight", s.ocr.max_in_flight, "Concurrent remote OCR requests")->check(CLI::PositiveNumber);
    app->add_option("--retries", s.ocr.max_attempts, "Attempts per remote OCR request")->check(CLI::PositiveNumber);
    app->add_option("--mock-scale", s.ocr.mock_scale, "Glyph scale for the mock OCR")->check(CLI::PositiveNumber);
    app->add_option("--mock-corruption", s.ocr.mock_corruption, "Per-digit corruption rate of the mock OCR")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--mock-seed", s.ocr.mock_seed, "Corruption seed of the mock OCR");
}

void add_locate_flags(CLI::App* app, Settings& s) {
    app->add_option("--samples", s.locate.samples, "Frames sampled for scorecard discovery")->check(CLI::PositiveNumber);
    app->add_option("--max-samples", s.locate.max_samples, "Sample count ceiling when discovery is retried")
        ->check(CLI::PositiveNumber);
    app->add_option("--iou", s.locate.iou, "IoU for grouping text boxes")->check(CLI::Range(0.0, 1.0));
    app->add_option("--min-score", s.locate.min_score, "Minimum gradual-change score")->check(CLI::Range(0.0, 1.0));
}

void add_extract_flags(CLI::App* app, Settings& s) {
    app->add_option("--roi", s.roi, "Scorecard box x,y,w,h (skips discovery)");
    app->add_option("--reference", s.reference, "Reference scorecard PNG (with --roi)");
    app->add_option("--locator", s.locator, "locator.json from a previous locate run");
    app->add_option("--reject-threshold", s.extract.reject_threshold, "Mean L1 above which a crop is occluded");
    app->add_option("--change-threshold", s.extract.change_threshold, "Mean L1 at or below which a crop is unchanged");
    app->add_option("--stack-capacity", s.extract.stack_capacity, "Crops per OCR call")->check(CLI::PositiveNumber);
    app->add_option("--stack-columns", s.extract.stack_columns, "Columns in the stacked OCR image")
        ->check(CLI::PositiveNumber);
    app->add_option("--repair-window", s.extract.repair_window, "Frames either side for repair votes");
    app->add_option("--rereads", s.extract.rereads, "Extra reads of a suspicious state");
    app->add_option("--dedup", s.dedup, "Unchanged test against last-accepted or consecutive frame");
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"Align sports broadcast frames with play-by-play commentary", "asap-align"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    Settings s;

    app.set_config("--config", "", "JSON config file (flags override it)");
    app.config_formatter(std::make_shared<JsonConfig>(&app));
    app.add_option("--workers", s.workers, "Worker threads")->check(CLI::PositiveNumber);

    auto* locate = app.add_subcommand("locate", "Find the scorecard box and reference template");
    locate->add_option("--frames", s.frames, "Frame directory (frame_%08d.png + manifest.json)");
    locate->add_option("--profile", s.profile, "Sport profile");
    locate->add_option("--out", s.out, "Output directory");
    add_ocr_flags(locate, s);
    add_locate_flags(locate, s);

    auto* extract = app.add_subcommand("extract", "Read match states and club frames into intervals");
    extract->add_option("--frames", s.frames, "Frame directory");
    extract->add_option("--profile", s.profile, "Sport profile");
    extract->add_option("--out", s.out, "Output directory");
    add_ocr_flags(extract, s);
    add_locate_flags(extract, s);
    add_extract_flags(extract, s);

    auto* align_cmd = app.add_subcommand("align", "Align commentary with state intervals");
    align_cmd->add_option("--commentary", s.commentary, "Canonical commentary document");
    align_cmd->add_option("--intervals", s.intervals, "intervals.jsonl (otherwise extracted from --frames)");
    align_cmd->add_option("--frames", s.frames, "Frame directory");
    align_cmd->add_option("--fps", s.fps, "Frame rate when --intervals is given without frames");
    align_cmd->add_option("--profile", s.profile, "Sport profile");
    align_cmd->add_option("--out", s.out, "Output directory");
    add_ocr_flags(align_cmd, s);
    add_locate_flags(align_cmd, s);
    add_extract_flags(align_cmd, s);

    auto* segment = app.add_subcommand("segment", "Cut an aligned cricket chain into N-over clips");
    segment->add_option("--aligned", s.aligned, "aligned.jsonl");
    segment->add_option("--profile", s.profile, "Sport profile");
    segment->add_option("--overs", s.overs, "Overs per clip")->check(CLI::PositiveNumber);
    segment->add_option("--match-id", s.match_id, "Match identifier");
    segment->add_option("--out", s.out, "Output directory");

    auto* split = app.add_subcommand("split", "Split matches 60:20:20 by hours");
    split->add_option("--matches", s.matches, "JSON list of {id, hours}");
    split->add_option("--seed", s.seed, "Shuffle seed for equal-length matches");
    split->add_option("--out", s.out, "Output directory");

    auto* export_cmd = app.add_subcommand("export", "Write masked, subsampled 128x128 clip frames");
    export_cmd->add_option("--frames", s.frames, "Frame directory");
    export_cmd->add_option("--clips", s.clips, "clips.json from segment");
    export_cmd->add_option("--roi", s.roi, "Scorecard box x,y,w,h");
    export_cmd->add_option("--locator", s.locator, "locator.json from locate");
    export_cmd->add_option("--fps-target", s.fps_target, "Output frame rate")->check(CLI::PositiveNumber);
    export_cmd->add_option("--out", s.out, "Output directory");

    auto* queries = app.add_subcommand("queries", "Compositional query sets");
    queries->require_subcommand(1);
    auto* gen = queries->add_subcommand("gen", "Generate a seeded query set");
    gen->add_option("--n", s.n, "Binary queries to generate");
    gen->add_option("--seed", s.seed, "Generator seed");
    gen->add_option("--clip-overs", s.clip_overs, "Clip length tag for the set");
    gen->add_option("--counting", s.counting, "Counting queries to add");
    gen->add_flag("--regression", s.regression, "Add the total-runs regression query");
    gen->add_option("--out", s.out, "Output directory");
    auto* eval = queries->add_subcommand("eval", "Answer a query set on event chains");
    eval->add_option("--set", s.set, "queries.json");
    eval->add_option("--chains", s.chains, "Chains file or clips.json");
    eval->add_option("--out", s.out, "Output directory");
    auto* balance = queries->add_subcommand("balance", "Keep queries with balanced truth probability");
    balance->add_option("--set", s.set, "queries.json");
    balance->add_option("--chains", s.chains, "Chains file or clips.json");
    balance->add_option("--lo", s.lo, "Lower probability bound (inclusive)");
    balance->add_option("--hi", s.hi, "Upper probability bound (inclusive)");
    balance->add_option("--mode", s.balance_mode, "per-query or set-average");
    balance->add_option("--out", s.out, "Output directory");

    auto* verify = app.add_subcommand("verify", "Score aligned events against timestamp marks");
    verify->add_option("--aligned", s.aligned, "aligned.jsonl");
    verify->add_option("--marks", s.marks, "JSON lines of {event, t_ms}");
    verify->add_option("--profile", s.profile, "Sport profile");
    verify->add_option("--fps", s.fps, "Frame rate of the aligned frames");
    verify->add_option("--out", s.out, "Output directory");

    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic broadcast with ground truth");
    synth_cmd->add_option("--scenario", s.scenario, "Scenario JSON (otherwise random from --seed)");
    synth_cmd->add_option("--profile", s.profile, "Sport profile for random scenarios");
    synth_cmd->add_option("--seed", s.seed, "Scenario seed");
    synth_cmd->add_option("--events", s.events, "Deliveries or plays in a random scenario");
    synth_cmd->add_option("--occlusion", s.occlusion, "Fraction of each interval hidden by overlays")
        ->check(CLI::Range(0.0, 0.9));
    synth_cmd->add_option("--out", s.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    if (sub == queries) sub = queries->get_subcommands().front();
    const std::string name = sub == gen || sub == eval || sub == balance ? "queries " + sub->get_name() : sub->get_name();
    try {
        if (sub == locate) return cmd_locate(s, sub);
        if (sub == extract) return cmd_extract(s, sub);
        if (sub == align_cmd) return cmd_align(s, sub);
        if (sub == segment) return cmd_segment(s, sub);
        if (sub == split) return cmd_split(s, sub);
        if (sub == export_cmd) return cmd_export(s, sub);
        if (sub == gen) return cmd_queries_gen(s, sub);
        if (sub == eval) return cmd_queries_eval(s, sub);
        if (sub == balance) return cmd_queries_balance(s, sub);
        if (sub == verify) return cmd_verify(s, sub);
        if (sub == synth_cmd) return cmd_synth(s, sub);
    } catch (const UsageError& e) {
        std::cerr << "asap-align " << name << ": " << e.what() << "\n\n" << sub->help();
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "asap-align " << name << ": error: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const json::exception& e) {
        std::cerr << "asap-align " << name << ": error: malformed input: " << e.what() << "\n";
        return kExitPipeline;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "asap-align " << name << ": error: " << e.what() << "\n";
        return kExitPipeline;
    }
    return kExitUsage;
}

}  // namespace asap::cli
