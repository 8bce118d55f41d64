#include "asap/png_io.hpp"

#include <fstream>
#include <iterator>

#include <png.h>

#include "asap/errors.hpp"

namespace asap {
namespace {

Raster finish_read(png_image& image) {
    const int width = static_cast<int>(image.width);
    const int height = static_cast<int>(image.height);
    if (image.format & PNG_FORMAT_FLAG_COLOR) {
        image.format = PNG_FORMAT_RGB;
        std::vector<std::uint8_t> rgb(PNG_IMAGE_SIZE(image));
        if (!png_image_finish_read(&image, nullptr, rgb.data(), 0, nullptr)) {
            throw IoError(std::string("png decode failed: ") + image.message);
        }
        return luma_from_rgb(rgb, width, height);
    }
    image.format = PNG_FORMAT_GRAY;
    Raster out(height, width);
    if (!png_image_finish_read(&image, nullptr, out.data(), 0, nullptr)) {
        throw IoError(std::string("png decode failed: ") + image.message);
    }
    return out;
}

png_image gray_image(const Raster& raster) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(raster.cols());
    image.height = static_cast<png_uint_32>(raster.rows());
    image.format = PNG_FORMAT_GRAY;
    return image;
}

}  // namespace

Raster decode_png(std::span<const std::uint8_t> bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw IoError(std::string("png header: ") + image.message);
    }
    return finish_read(image);
}

Raster read_png(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_png(bytes);
    } catch (const IoError& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_png(const Raster& raster) {
    png_image image = gray_image(raster);
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, raster.data(), 0, nullptr)) {
        throw IoError(std::string("png encode: ") + image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, raster.data(), 0, nullptr)) {
        throw IoError(std::string("png encode: ") + image.message);
    }
    out.resize(size);
    return out;
}

void write_png(const std::filesystem::path& path, const Raster& raster) {
    const auto bytes = encode_png(raster);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

}  // namespace asap
