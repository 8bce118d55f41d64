#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "asap/raster.hpp"

namespace asap {

// Random-access, ordered sequence of decoded grayscale frames.
class FrameSource {
public:
    virtual ~FrameSource() = default;
    virtual std::int64_t size() const = 0;
    virtual double fps() const = 0;
    virtual int width() const = 0;
    virtual int height() const = 0;
    /// Safe to call concurrently.
    virtual Raster pixels(std::int64_t index) const = 0;

    Frame frame(std::int64_t index) const { return {index, frame_timestamp_ms(index, fps()), pixels(index)}; }
};

class MemoryFrameSource final : public FrameSource {
public:
    MemoryFrameSource(std::vector<Raster> frames, double fps);
    std::int64_t size() const override { return static_cast<std::int64_t>(frames_.size()); }
    double fps() const override { return fps_; }
    int width() const override { return width_; }
    int height() const override { return height_; }
    Raster pixels(std::int64_t index) const override;

private:
    std::vector<Raster> frames_;
    double fps_;
    int width_ = 0;
    int height_ = 0;
};

struct FrameManifest {
    double fps = 30.0;
    std::int64_t count = 0;
    int width = 0;
    int height = 0;
};

/// frame_%08d.png files plus manifest.json {fps, count, width, height}.
class DirectoryFrameSource final : public FrameSource {
public:
    explicit DirectoryFrameSource(std::filesystem::path dir);
    std::int64_t size() const override { return manifest_.count; }
    double fps() const override { return manifest_.fps; }
    int width() const override { return manifest_.width; }
    int height() const override { return manifest_.height; }
    Raster pixels(std::int64_t index) const override;

private:
    std::filesystem::path dir_;
    FrameManifest manifest_;
};

std::string frame_file_name(std::int64_t index);
FrameManifest read_frame_manifest(const std::filesystem::path& dir);
void write_frame_manifest(const std::filesystem::path& dir, const FrameManifest& manifest);

}  // namespace asap
