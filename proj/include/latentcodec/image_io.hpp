#pragma once

// 8-bit RGB image files: binary PPM (P6) and PNG. PNG goes through libpng's
// simplified API, so gray, palette, alpha and 16-bit inputs are converted to RGB8.

#include <png.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "latentcodec/byte_io.hpp"
#include "latentcodec/error.hpp"
#include "latentcodec/latent.hpp"

namespace latentcodec::image_io {

inline Bytes encode_ppm(const ImageBuffer& img) {
    if (img.empty()) fail(Errc::invalid_argument, "cannot write an empty image");
    const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.insert(out.end(), img.pixels.begin(), img.pixels.end());
    return out;
}

inline ImageBuffer decode_ppm(std::span<const std::uint8_t> data) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < data.size()) {
            if (data[pos] == '#') {
                while (pos < data.size() && data[pos] != '\n') ++pos;
            } else if (std::isspace(data[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto number = [&] {
        skip_space();
        if (pos >= data.size() || !std::isdigit(data[pos])) fail(Errc::bad_magic, "malformed PPM header");
        std::uint64_t v = 0;
        while (pos < data.size() && std::isdigit(data[pos])) {
            v = v * 10 + (data[pos++] - '0');
            if (v > (1u << 24)) fail(Errc::corrupt_payload, "PPM dimension too large");
        }
        return static_cast<std::uint32_t>(v);
    };
    if (data.size() < 2 || data[0] != 'P' || data[1] != '6') fail(Errc::bad_magic, "not a binary PPM (P6)");
    pos = 2;
    const auto width = number();
    const auto height = number();
    const auto maxval = number();
    if (maxval != 255) fail(Errc::unsupported_dtype, "PPM maxval " + std::to_string(maxval) + " (only 8-bit supported)");
    if (pos >= data.size() || !std::isspace(data[pos])) fail(Errc::bad_magic, "malformed PPM header");
    ++pos;
    if (width == 0 || height == 0) fail(Errc::corrupt_payload, "PPM has zero area");
    ImageBuffer img(height, width);
    if (data.size() - pos < img.pixels.size()) fail(Errc::truncated_payload, "PPM pixel data incomplete");
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(pos), img.pixels.size(), img.pixels.begin());
    return img;
}

inline Bytes encode_png(const ImageBuffer& img) {
    if (img.empty()) fail(Errc::invalid_argument, "cannot write an empty image");
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    image.width = img.width;
    image.height = img.height;
    image.format = PNG_FORMAT_RGB;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&image, nullptr, &size, 0, img.pixels.data(), 0, nullptr))
        fail(Errc::io_error, std::string("PNG encode: ") + image.message);
    Bytes out(size);
    if (!png_image_write_to_memory(&image, out.data(), &size, 0, img.pixels.data(), 0, nullptr))
        fail(Errc::io_error, std::string("PNG encode: ") + image.message);
    out.resize(size);
    return out;
}

inline ImageBuffer decode_png(std::span<const std::uint8_t> data) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, data.data(), data.size()))
        fail(Errc::bad_magic, std::string("PNG decode: ") + image.message);
    image.format = PNG_FORMAT_RGB;
    if (image.width == 0 || image.height == 0) {
        png_image_free(&image);
        fail(Errc::corrupt_payload, "PNG has zero area");
    }
    ImageBuffer img(image.height, image.width);
    if (!png_image_finish_read(&image, nullptr, img.pixels.data(), 0, nullptr))
        fail(Errc::corrupt_payload, std::string("PNG decode: ") + image.message);
    return img;
}

inline bool is_png(std::span<const std::uint8_t> data) {
    static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return data.size() >= 8 && std::equal(std::begin(sig), std::end(sig), data.begin());
}

/// Dispatches on content, not extension.
inline ImageBuffer read_image(const std::filesystem::path& path) {
    const Bytes data = read_file(path);
    return is_png(data) ? decode_png(data) : decode_ppm(data);
}

/// PNG for ".png", binary PPM otherwise.
inline void write_image(const std::filesystem::path& path, const ImageBuffer& img) {
    auto ext = path.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    write_file(path, ext == ".png" ? encode_png(img) : encode_ppm(img));
}

inline bool is_image_path(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext == ".png" || ext == ".ppm";
}

}  // namespace latentcodec::image_io
