#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "asap/raster.hpp"

namespace asap {

// 8-bit grayscale PNG. Color inputs are reduced with the integer luma rule;
// alpha is ignored.
Raster read_png(const std::filesystem::path& path);
Raster decode_png(std::span<const std::uint8_t> bytes);

void write_png(const std::filesystem::path& path, const Raster& raster);
std::vector<std::uint8_t> encode_png(const Raster& raster);

}  // namespace asap
