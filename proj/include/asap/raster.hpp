#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>

#include <Eigen/Core>

#include "asap/errors.hpp"

namespace asap {

// Rasters are row-major dense matrices: rows() is the height, cols() the width.
template <typename Scalar>
using Image = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Raster = Image<std::uint8_t>;

struct Roi {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    long area() const { return static_cast<long>(w) * h; }
    bool fits(int width, int height) const {
        return x >= 0 && y >= 0 && w > 0 && h > 0 && x + w <= width && y + h <= height;
    }
    bool operator==(const Roi&) const = default;
};

inline Roi union_box(const Roi& a, const Roi& b) {
    const int x0 = std::min(a.x, b.x);
    const int y0 = std::min(a.y, b.y);
    const int x1 = std::max(a.x + a.w, b.x + b.w);
    const int y1 = std::max(a.y + a.h, b.y + b.h);
    return {x0, y0, x1 - x0, y1 - y0};
}

inline double iou(const Roi& a, const Roi& b) {
    const int ix = std::max(0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const int iy = std::max(0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = static_cast<double>(ix) * iy;
    const double uni = static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

// Grows the box by margin on every side, clamped to a width x height canvas.
inline Roi expand(const Roi& r, int margin, int width, int height) {
    const int x0 = std::max(0, r.x - margin);
    const int y0 = std::max(0, r.y - margin);
    const int x1 = std::min(width, r.x + r.w + margin);
    const int y1 = std::min(height, r.y + r.h + margin);
    return {x0, y0, x1 - x0, y1 - y0};
}

template <typename Derived>
auto crop(const Eigen::MatrixBase<Derived>& image, const Roi& roi) {
    if (!roi.fits(static_cast<int>(image.cols()), static_cast<int>(image.rows()))) {
        throw DimensionMismatchError("roi outside raster bounds");
    }
    return image.block(roi.y, roi.x, roi.h, roi.w);
}

template <typename DerivedA, typename DerivedB>
std::int64_t sum_abs_diff(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatchError("raster dimensions differ: " + std::to_string(a.cols()) + "x" +
                                     std::to_string(a.rows()) + " vs " + std::to_string(b.cols()) +
                                     "x" + std::to_string(b.rows()));
    }
    // Row sums stay in int32 (255 * 2^23 columns would be needed to overflow).
    std::int64_t total = 0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        total += (a.row(r).template cast<std::int32_t>() - b.row(r).template cast<std::int32_t>())
                     .cwiseAbs()
                     .sum();
    }
    return total;
}

// Mean absolute pixel difference; exact integer accumulation, one division.
template <typename DerivedA, typename DerivedB>
double mean_l1(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    const std::int64_t total = sum_abs_diff(a, b);
    const auto count = static_cast<double>(a.rows() * a.cols());
    return count > 0 ? static_cast<double>(total) / count : 0.0;
}

// Integer luma approximation used for every color input.
inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    return static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b) >> 8);
}

inline Raster luma_from_rgb(std::span<const std::uint8_t> rgb, int width, int height) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3) {
        throw DimensionMismatchError("rgb buffer size does not match dimensions");
    }
    Raster out(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
            out(y, x) = luma(rgb[i], rgb[i + 1], rgb[i + 2]);
        }
    }
    return out;
}

// Area-averaging resize. Output pixel (r, c) averages the source rectangle
// [floor(r*H/h), floor((r+1)*H/h)) x [floor(c*W/w), floor((c+1)*W/w)), widened
// to at least one pixel when upsampling. Rounds half up.
template <typename Scalar>
Image<Scalar> resize_area(const Image<Scalar>& src, int out_w, int out_h) {
    const long src_h = src.rows();
    const long src_w = src.cols();
    Image<Scalar> out(out_h, out_w);
    for (int r = 0; r < out_h; ++r) {
        const long y0 = r * src_h / out_h;
        const long y1 = std::max(y0 + 1, (r + 1) * src_h / out_h);
        for (int c = 0; c < out_w; ++c) {
            const long x0 = c * src_w / out_w;
            const long x1 = std::max(x0 + 1, (c + 1) * src_w / out_w);
            const std::int64_t sum = src.block(y0, x0, y1 - y0, x1 - x0).template cast<std::int64_t>().sum();
            const std::int64_t n = (y1 - y0) * (x1 - x0);
            out(r, c) = static_cast<Scalar>((2 * sum + n) / (2 * n));
        }
    }
    return out;
}

struct Frame {
    std::int64_t index = 0;
    std::int64_t timestamp_ms = 0;
    Raster pixels;
};

inline std::int64_t frame_timestamp_ms(std::int64_t index, double fps) {
    return static_cast<std::int64_t>(static_cast<double>(index) * 1000.0 / fps + 0.5);
}

}  // namespace asap
