#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "asap/aligner.hpp"
#include "asap/extractor.hpp"
#include "asap/locator.hpp"
#include "asap/ocr.hpp"
#include "asap/sport_profile.hpp"
#include "asap/synth.hpp"

namespace asap::test {

inline const SportProfile& profile(const char* sport) { return ProfileRegistry::builtin().get(sport); }
inline const SportProfile& cricket() { return profile("cricket"); }

struct PipelineRun {
    LocatorResult located;
    ExtractionResult extraction;
    Alignment alignment;
    long extraction_calls = 0;
};

// locate -> extract -> align on a synthetic scenario, counting OCR calls made
// during extraction only.
inline PipelineRun run_pipeline(const synth::Scenario& sc, MockOcrOptions ocr = {}, ExtractionConfig cfg = {},
                                std::int64_t samples = 32) {
    const auto& prof = profile(sc.sport.c_str());
    const synth::SyntheticFrameSource source(sc);
    MockRecognizer mock(ocr);
    CountingRecognizer counter(mock);

    PipelineRun run;
    run.located = locate_in_source(source, counter, prof, std::min<std::int64_t>(samples, source.size()));
    counter.reset();
    run.extraction = extract_intervals(source, run.located.roi, run.located.reference, counter, prof, cfg);
    run.extraction_calls = counter.calls();
    const auto truth = synth::ground_truth(sc);
    const auto entries = adjust_timestamps(truth.commentary.entries, prof);
    run.alignment = align(run.extraction.intervals, entries, prof);
    return run;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("asap_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace asap::test
