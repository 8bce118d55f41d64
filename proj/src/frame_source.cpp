#include "asap/frame_source.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "asap/errors.hpp"
#include "asap/png_io.hpp"

namespace asap {

MemoryFrameSource::MemoryFrameSource(std::vector<Raster> frames, double fps) : frames_(std::move(frames)), fps_(fps) {
    if (fps_ <= 0) throw Error("fps must be positive");
    if (!frames_.empty()) {
        width_ = static_cast<int>(frames_.front().cols());
        height_ = static_cast<int>(frames_.front().rows());
        for (const auto& f : frames_) {
            if (f.cols() != width_ || f.rows() != height_) throw DimensionMismatchError("frames differ in size");
        }
    }
}

Raster MemoryFrameSource::pixels(std::int64_t index) const {
    if (index < 0 || index >= size()) throw Error("frame index out of range");
    return frames_[static_cast<std::size_t>(index)];
}

std::string frame_file_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%08lld.png", static_cast<long long>(index));
    return buf;
}

FrameManifest read_frame_manifest(const std::filesystem::path& dir) {
    const auto path = dir / "manifest.json";
    std::ifstream in(path);
    if (!in) throw IoError("missing frame manifest " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string(), e.what());
    }
    FrameManifest m;
    try {
        m.fps = j.at("fps").get<double>();
        m.count = j.at("count").get<std::int64_t>();
        m.width = j.at("width").get<int>();
        m.height = j.at("height").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path.string(), e.what());
    }
    if (m.fps <= 0 || m.count < 0 || m.width <= 0 || m.height <= 0) {
        throw SchemaError(path.string(), "fps, width and height must be positive");
    }
    return m;
}

void write_frame_manifest(const std::filesystem::path& dir, const FrameManifest& m) {
    nlohmann::json j{{"fps", m.fps}, {"count", m.count}, {"width", m.width}, {"height", m.height}};
    std::ofstream out(dir / "manifest.json");
    if (!out) throw IoError("cannot write manifest in " + dir.string());
    out << j.dump(2) << '\n';
}

DirectoryFrameSource::DirectoryFrameSource(std::filesystem::path dir)
    : dir_(std::move(dir)), manifest_(read_frame_manifest(dir_)) {}

Raster DirectoryFrameSource::pixels(std::int64_t index) const {
    if (index < 0 || index >= size()) throw Error("frame index out of range");
    Raster r = read_png(dir_ / frame_file_name(index));
    if (r.cols() != manifest_.width || r.rows() != manifest_.height) {
        throw DimensionMismatchError(frame_file_name(index) + " does not match manifest dimensions");
    }
    return r;
}

}  // namespace asap
