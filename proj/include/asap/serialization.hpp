#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asap/aligner.hpp"
#include "asap/extractor.hpp"
#include "asap/sport_profile.hpp"

namespace asap {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// {"state": "30.4", "frame_start": 100, "frame_end": 699}
std::string intervals_to_jsonl(std::span<const StateInterval> intervals);
std::vector<StateInterval> intervals_from_jsonl(std::string_view text, const SportProfile& profile);

// {"event", "state", "frame_start", "frame_end", "t_start_ms", "t_end_ms", "text", "confidence"}
std::string aligned_to_jsonl(std::span<const AlignedEvent> events, double fps);
std::vector<AlignedEvent> aligned_from_jsonl(std::string_view text, const SportProfile& profile);

// {"event": "4 runs", "t_ms": 12345}
std::string marks_to_jsonl(std::span<const TimestampMark> marks);
std::vector<TimestampMark> marks_from_jsonl(std::string_view text);

/// frame,verdict,state
std::string observations_to_csv(std::span<const RawObservation> observations);

}  // namespace asap
