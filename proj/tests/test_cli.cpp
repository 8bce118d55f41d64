#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "asap/cli.hpp"
#include "asap/query.hpp"
#include "asap/serialization.hpp"
#include "support.hpp"

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace asap;

namespace {

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "asap-align");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) { return read_text_file(p); }

std::string str(const fs::path& p) { return p.string(); }

// One small synthetic cricket match, shared by the pipeline tests.
const fs::path& synth_match() {
    static const fs::path dir = [] {
        const auto d = asap::test::scratch_dir("cli_synth");
        REQUIRE(run_cli({"synth", "--profile", "cricket", "--seed", "11", "--events", "18", "--out", str(d)}) == 0);
        return d;
    }();
    return dir;
}

// align --ocr mock over the synthetic frames.
const fs::path& aligned_run() {
    static const fs::path dir = [] {
        const auto d = asap::test::scratch_dir("cli_align");
        const auto& m = synth_match();
        REQUIRE(run_cli({"align", "--profile", "cricket", "--ocr", "mock", "--frames", str(m / "frames"), "--commentary",
                         str(m / "commentary.json"), "--workers", "2", "--out", str(d)}) == 0);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("usage errors exit with status 2") {
    const auto out = asap::test::scratch_dir("cli_usage");
    CHECK(run_cli({"locate", "--frames", str(out), "--out", str(out)}) == 2);
    CHECK(run_cli({"extract", "--profile", "hockey", "--frames", str(out), "--out", str(out)}) == 2);
    CHECK(run_cli({}) == 2);
    CHECK(run_cli({"frobnicate"}) == 2);
    CHECK(run_cli({"queries"}) == 2);
    CHECK(run_cli({"verify", "--profile", "cricket", "--aligned", "a", "--marks", "m", "--out", str(out)}) == 2);
}

TEST_CASE("pipeline failures exit with status 1") {
    const auto out = asap::test::scratch_dir("cli_failure");
    CHECK(run_cli({"locate", "--profile", "cricket", "--ocr", "mock", "--frames", str(out / "missing"), "--out",
                   str(out)}) == 1);
}

TEST_CASE("queries gen is byte-identical for a fixed seed") {
    const auto a = asap::test::scratch_dir("cli_gen_a");
    const auto b = asap::test::scratch_dir("cli_gen_b");
    const auto c = asap::test::scratch_dir("cli_gen_c");
    REQUIRE(run_cli({"queries", "gen", "--n", "100", "--seed", "7", "--out", str(a)}) == 0);
    REQUIRE(run_cli({"queries", "gen", "--n", "100", "--seed", "7", "--out", str(b)}) == 0);
    REQUIRE(run_cli({"queries", "gen", "--n", "100", "--seed", "8", "--out", str(c)}) == 0);
    CHECK(slurp(a / "queries.json") == slurp(b / "queries.json"));
    CHECK(slurp(a / "queries.json") != slurp(c / "queries.json"));

    const auto doc = json::parse(slurp(a / "queries.json"));
    REQUIRE(doc.at("queries").size() == 100);
    const auto expected = generate_query_set(100, 7);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(doc["queries"][i]["text"] == format_query(expected[i]));
        CHECK(doc["queries"][i]["kind"] == "binary");
    }
    CHECK(json::parse(slurp(a / "effective_config.json")).is_object());
}

TEST_CASE("synth then align with mock OCR reproduces the ground truth") {
    const auto& m = synth_match();
    const auto& d = aligned_run();
    CHECK(slurp(d / "aligned.jsonl") == slurp(m / "truth_events.jsonl"));
    CHECK(slurp(d / "intervals.jsonl") == slurp(m / "truth_intervals.jsonl"));

    const auto& prof = asap::test::cricket();
    const auto events = aligned_from_jsonl(slurp(d / "aligned.jsonl"), prof);
    CHECK(aligned_to_jsonl(events, 30.0) == slurp(d / "aligned.jsonl"));
    CHECK(intervals_to_jsonl(intervals_from_jsonl(slurp(d / "intervals.jsonl"), prof)) == slurp(d / "intervals.jsonl"));

    const auto report = json::parse(slurp(d / "alignment_report.json"));
    CHECK(report["aligned"] == events.size());
    CHECK(report["unmatched_entries"].empty());
    const auto locator = json::parse(slurp(d / "locator.json"));
    CHECK(locator.contains("roi"));
    CHECK(fs::exists(d / "reference.png"));
    CHECK(fs::file_size(d / "aligned.srt") > 0);
}

TEST_CASE("extract reuses a locator file") {
    const auto& m = synth_match();
    const auto& d = aligned_run();
    const auto out = asap::test::scratch_dir("cli_extract");
    REQUIRE(run_cli({"extract", "--profile", "cricket", "--ocr", "mock", "--frames", str(m / "frames"), "--locator",
                     str(d / "locator.json"), "--out", str(out)}) == 0);
    CHECK(slurp(out / "intervals.jsonl") == slurp(m / "truth_intervals.jsonl"));
    CHECK_FALSE(fs::exists(out / "locator.json"));
    const auto stats = json::parse(slurp(out / "extraction_stats.json"));
    CHECK(stats.contains("intervals"));

    // align from the intervals file alone
    const auto again = asap::test::scratch_dir("cli_align_intervals");
    REQUIRE(run_cli({"align", "--profile", "cricket", "--intervals", str(out / "intervals.jsonl"), "--fps", "30",
                     "--commentary", str(m / "commentary.json"), "--out", str(again)}) == 0);
    CHECK(slurp(again / "aligned.jsonl") == slurp(m / "truth_events.jsonl"));
}

TEST_CASE("verify scores the truth marks at 1.0") {
    const auto& m = synth_match();
    const auto& d = aligned_run();
    const auto out = asap::test::scratch_dir("cli_verify");
    REQUIRE(run_cli({"verify", "--profile", "cricket", "--aligned", str(d / "aligned.jsonl"), "--marks",
                     str(m / "truth_marks.jsonl"), "--fps", "30", "--out", str(out)}) == 0);
    const auto doc = json::parse(slurp(out / "verification.json"));
    CHECK(doc["accuracy"] == 1.0);
    CHECK(doc["correct"].size() == marks_from_jsonl(slurp(m / "truth_marks.jsonl")).size());
}

TEST_CASE("segment, queries eval/balance and export chain together") {
    const auto& m = synth_match();
    const auto& d = aligned_run();
    const auto seg = asap::test::scratch_dir("cli_segment");
    REQUIRE(run_cli({"segment", "--profile", "cricket", "--aligned", str(d / "aligned.jsonl"), "--overs", "1",
                     "--match-id", "m11", "--out", str(seg)}) == 0);
    const auto clips = json::parse(slurp(seg / "clips.json"));
    REQUIRE_FALSE(clips["clips"].empty());
    std::size_t events = 0;
    for (const auto& c : clips["clips"]) {
        events += c["event_count"].get<std::size_t>();
        CHECK(c["total_runs"] == total_runs(parse_tokens(c["tokens"].get<std::string>())));
        CHECK(c["id"].get<std::string>().rfind("m11-", 0) == 0);
    }
    CHECK(events == aligned_from_jsonl(slurp(d / "aligned.jsonl"), asap::test::cricket()).size());

    const auto q = asap::test::scratch_dir("cli_queries");
    REQUIRE(run_cli({"queries", "gen", "--n", "40", "--seed", "3", "--counting", "5", "--regression", "--out",
                     str(q)}) == 0);
    REQUIRE(run_cli({"queries", "eval", "--set", str(q / "queries.json"), "--chains", str(seg / "clips.json"), "--out",
                     str(q)}) == 0);
    const auto csv = slurp(q / "query_report.csv");
    const auto rows = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
    CHECK(rows == 1 + 46 * clips["clips"].size());

    REQUIRE(run_cli({"queries", "balance", "--set", str(q / "queries.json"), "--chains", str(seg / "clips.json"),
                     "--lo", "0.3", "--hi", "0.7", "--out", str(q)}) == 0);
    const auto balanced = json::parse(slurp(q / "balanced_queries.json"));
    std::vector<TokenChain> corpus;
    for (const auto& c : clips["clips"]) corpus.push_back(parse_tokens(c["tokens"].get<std::string>()));
    const auto kept = filter_balanced(generate_query_set(40, 3), corpus, 0.3, 0.7);
    REQUIRE(balanced["queries"].size() == kept.size() + 6);
    for (std::size_t i = 0; i < kept.size(); ++i) CHECK(balanced["queries"][i]["text"] == format_query(kept[i]));
    CHECK(run_cli({"queries", "balance", "--set", str(q / "queries.json"), "--chains", str(seg / "clips.json"),
                   "--mode", "median", "--out", str(q)}) == 2);

    const auto ex = asap::test::scratch_dir("cli_export");
    REQUIRE(run_cli({"export", "--frames", str(m / "frames"), "--clips", str(seg / "clips.json"), "--locator",
                     str(d / "locator.json"), "--fps-target", "1", "--out", str(ex)}) == 0);
    for (const auto& c : clips["clips"]) {
        const auto dir = ex / c["id"].get<std::string>();
        REQUIRE(fs::exists(dir / "index.json"));
        const auto span = c["frame_end"].get<std::int64_t>() - c["frame_start"].get<std::int64_t>();
        const auto pngs = std::count_if(fs::directory_iterator(dir), fs::directory_iterator(),
                                        [](const auto& e) { return e.path().extension() == ".png"; });
        CHECK(pngs == span / 30 + 1);
    }
}

TEST_CASE("split writes a 60:20:20 assignment") {
    const auto out = asap::test::scratch_dir("cli_split");
    json matches = json::array();
    for (int i = 0; i < 10; ++i) matches.push_back({{"id", "m" + std::to_string(i)}, {"hours", 3.0}});
    write_text_file(out / "matches.json", matches.dump());
    REQUIRE(run_cli({"split", "--matches", str(out / "matches.json"), "--seed", "4", "--out", str(out)}) == 0);
    const auto doc = json::parse(slurp(out / "splits.json"));
    CHECK(doc["train"].size() == 6);
    CHECK(doc["val"].size() == 2);
    CHECK(doc["test"].size() == 2);
}
