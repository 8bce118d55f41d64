#include <cmath>
#include <fstream>

#include <json.hpp>

#include "asap/dataset.hpp"
#include "asap/errors.hpp"
#include "asap/parallel.hpp"
#include "asap/png_io.hpp"

namespace asap {
namespace {

struct OverSpan {
    int over = 0;
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the last event
    bool whole = false;
};

std::vector<OverSpan> over_spans(std::span<const AlignedEvent> chain) {
    std::vector<OverSpan> spans;
    std::vector<int> legal_balls;
    const auto close = [&] {
        if (spans.empty()) return;
        bool whole = legal_balls.size() == 6;
        for (std::size_t k = 0; whole && k < legal_balls.size(); ++k) whole = legal_balls[k] == static_cast<int>(k) + 1;
        spans.back().whole = whole;
        legal_balls.clear();
    };
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto* ob = std::get_if<OverBall>(&chain[i].interval.state);
        if (!ob) throw UnsupportedError("segment_clips needs an over-ball chain");
        if (spans.empty() || spans.back().over != ob->over) {
            close();
            spans.push_back({ob->over, i, i, false});
        }
        spans.back().end = i + 1;
        if (!std::holds_alternative<Wide>(chain[i].event)) legal_balls.push_back(ob->ball);
    }
    close();
    return spans;
}

}  // namespace

std::vector<Clip> segment_clips(std::span<const AlignedEvent> chain, int overs_per_clip, const std::string& match_id) {
    if (overs_per_clip < 1) throw Error("overs_per_clip must be positive");
    std::vector<Clip> clips;
    std::vector<OverSpan> run;
    for (const auto& span : over_spans(chain)) {
        if (!span.whole || (!run.empty() && span.over != run.back().over + 1)) run.clear();
        if (!span.whole) continue;
        run.push_back(span);
        if (static_cast<int>(run.size()) < overs_per_clip) continue;

        Clip clip;
        clip.match_id = match_id;
        clip.first_over = run.front().over;
        clip.last_over = run.back().over;
        clip.events.assign(chain.begin() + static_cast<std::ptrdiff_t>(run.front().begin),
                           chain.begin() + static_cast<std::ptrdiff_t>(run.back().end));
        clip.frame_start = clip.events.front().interval.frame_start;
        clip.frame_end = clip.events.back().interval.frame_end;
        clips.push_back(std::move(clip));
        run.clear();
    }
    return clips;
}

std::int64_t export_stride(double source_fps, double target_fps) {
    if (target_fps <= 0 || source_fps <= 0) throw Error("fps must be positive");
    if (target_fps > source_fps) throw Error("target fps exceeds source fps");
    // The epsilon absorbs representation error in ratios like 30 / 0.1.
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(source_fps / target_fps + 1e-9)));
}

ExportedFrames export_clip_frames(const Clip& clip, const Roi& roi, const FrameSource& source, double fps_target,
                                  const std::filesystem::path& out_dir, int workers) {
    if (!roi.fits(source.width(), source.height())) throw DimensionMismatchError("roi outside frame bounds");
    if (clip.frame_start < 0 || clip.frame_end >= source.size() || clip.frame_end < clip.frame_start) {
        throw Error("clip frame range outside the source");
    }
    ExportedFrames out;
    out.stride = export_stride(source.fps(), fps_target);
    for (std::int64_t f = clip.frame_start; f <= clip.frame_end; f += out.stride) out.source_frames.push_back(f);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    out.files.resize(out.source_frames.size());
    parallel_for(out.source_frames.size(), workers, [&](std::size_t k) {
        Raster px = source.pixels(out.source_frames[k]);
        px.block(roi.y, roi.x, roi.h, roi.w).setZero();
        out.files[k] = out_dir / frame_file_name(static_cast<std::int64_t>(k));
        write_png(out.files[k], resize_area(px, kExportSize, kExportSize));
    });

    write_frame_manifest(out_dir, {fps_target, static_cast<std::int64_t>(out.files.size()), kExportSize, kExportSize});
    nlohmann::json index{{"match_id", clip.match_id},
                         {"source_fps", source.fps()},
                         {"stride", out.stride},
                         {"roi", {{"x", roi.x}, {"y", roi.y}, {"w", roi.w}, {"h", roi.h}}},
                         {"source_frames", out.source_frames}};
    std::ofstream idx(out_dir / "index.json");
    if (!idx) throw IoError("cannot write " + (out_dir / "index.json").string());
    idx << index.dump(2) << '\n';
    return out;
}

}  // namespace asap
