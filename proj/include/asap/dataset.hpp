#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "asap/aligner.hpp"
#include "asap/frame_source.hpp"
#include "asap/raster.hpp"

namespace asap {

struct Clip {
    std::string match_id;
    std::int64_t frame_start = 0;
    std::int64_t frame_end = 0;
    int first_over = 0;
    int last_over = 0;
    std::vector<AlignedEvent> events;
};

/// Cuts a cricket chain into clips of exactly `overs_per_clip` whole,
/// consecutive overs. An over is whole when its legal deliveries are balls
/// 1..6; wides ride along with the over they were bowled in. Partial overs
/// break a run of whole ones, and a trailing remainder is discarded.
std::vector<Clip> segment_clips(std::span<const AlignedEvent> chain, int overs_per_clip,
                                const std::string& match_id = "");

struct MatchHours {
    std::string id;
    double hours = 0.0;
};

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
    std::map<std::string, double> hours;  // per split name
};

/// Longest-first greedy assignment into whichever split is furthest below its
/// 60:20:20 share; equal-length matches are shuffled with `seed` first.
/// Throws InfeasibleError when one match exceeds 62% of all hours.
DatasetSplit split_dataset(std::span<const MatchHours> matches, std::uint64_t seed);

struct ExportedFrames {
    std::int64_t stride = 1;
    std::vector<std::int64_t> source_frames;
    std::vector<std::filesystem::path> files;
};

inline constexpr int kExportSize = 128;

/// Frame stride for subsampling: floor(source_fps / target_fps).
std::int64_t export_stride(double source_fps, double target_fps);

/// Samples the clip every export_stride frames, blacks out the scorecard ROI,
/// area-resizes to 128x128 and writes frame_%08d.png plus manifest.json.
ExportedFrames export_clip_frames(const Clip& clip, const Roi& roi, const FrameSource& source, double fps_target,
                                  const std::filesystem::path& out_dir, int workers = 1);

}  // namespace asap
