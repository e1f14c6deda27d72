#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latentcodec/byte_io.hpp"
#include "latentcodec/error.hpp"

namespace latentcodec {

/// Spatial downsample factor and channel count of a latent grid.
struct LatentLayout {
    std::uint32_t factor = 8;
    std::uint32_t channels = 4;
    std::string model_id;

    static constexpr std::uint32_t kMaxFactor = 256;
    static constexpr std::uint32_t kMaxChannels = 1024;

    void validate() const {
        if (factor < 1 || factor > kMaxFactor)
            fail(Errc::invalid_argument, "factor " + std::to_string(factor) + " outside 1..256");
        if (channels < 1 || channels > kMaxChannels)
            fail(Errc::invalid_argument, "channels " + std::to_string(channels) + " outside 1..1024");
        if (model_id.size() > kModelIdBytes) fail(Errc::invalid_argument, "model_id exceeds 16 bytes: " + model_id);
    }

    /// Layouts compare by geometry; model_id is a label.
    bool same_geometry(const LatentLayout& o) const noexcept { return factor == o.factor && channels == o.channels; }

    bool operator==(const LatentLayout&) const = default;
};

namespace presets {
inline LatentLayout sd15_like() { return {8, 4, "sd15-like"}; }
inline LatentLayout sd3_like() { return {8, 16, "sd3-like"}; }
inline LatentLayout dcae_like() { return {32, 32, "dcae-like"}; }
}  // namespace presets

inline std::optional<LatentLayout> layout_preset(std::string_view name) {
    if (name == "sd15-like") return presets::sd15_like();
    if (name == "sd3-like") return presets::sd3_like();
    if (name == "dcae-like") return presets::dcae_like();
    return std::nullopt;
}

enum class QuantMode : std::uint8_t { raw_f32 = 0, static_int8 = 1, kmeans_8bit = 2 };

inline const char* to_string(QuantMode m) noexcept {
    switch (m) {
    case QuantMode::raw_f32: return "raw";
    case QuantMode::static_int8: return "int8";
    case QuantMode::kmeans_8bit: return "kmeans";
    }
    return "?";
}

inline std::optional<QuantMode> parse_quant_mode(std::string_view s) {
    if (s == "raw" || s == "raw-f32") return QuantMode::raw_f32;
    if (s == "int8" || s == "static-int8") return QuantMode::static_int8;
    if (s == "kmeans" || s == "kmeans-8bit") return QuantMode::kmeans_8bit;
    return std::nullopt;
}

struct GridDims {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    bool operator==(const GridDims&) const = default;
};

namespace detail {
inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
        fail(Errc::size_overflow, std::to_string(a) + " * " + std::to_string(b));
    return a * b;
}
}  // namespace detail

/// Payload bytes for one latent grid: 4 bytes per value raw, 1 byte per index otherwise.
inline std::uint64_t latent_byte_size(const LatentLayout& layout, GridDims grid, QuantMode mode) {
    if (grid.height == 0 || grid.width == 0) fail(Errc::invalid_argument, "latent grid must have positive area");
    const std::uint64_t bytes_per_value = mode == QuantMode::raw_f32 ? 4 : 1;
    return detail::checked_mul(detail::checked_mul(detail::checked_mul(layout.channels, grid.height), grid.width),
                               bytes_per_value);
}

inline GridDims latent_grid_for_image(const LatentLayout& layout, std::uint32_t image_height, std::uint32_t image_width) {
    if (image_height == 0 || image_width == 0) fail(Errc::invalid_argument, "image dims must be positive");
    const auto f = layout.factor;
    return {(image_height + f - 1) / f, (image_width + f - 1) / f};
}

/// c x h x w latent activations, channel-major.
struct LatentTensor {
    LatentLayout layout;
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<float> values;

    LatentTensor() = default;
    LatentTensor(LatentLayout l, std::uint32_t h, std::uint32_t w)
        : layout(std::move(l)), height(h), width(w), values(static_cast<std::size_t>(layout.channels) * h * w, 0.0f) {}

    std::uint32_t channels() const noexcept { return layout.channels; }
    std::size_t plane_size() const noexcept { return static_cast<std::size_t>(height) * width; }
    GridDims grid() const noexcept { return {height, width}; }

    std::span<float> channel(std::uint32_t c) { return std::span<float>(values).subspan(c * plane_size(), plane_size()); }
    std::span<const float> channel(std::uint32_t c) const {
        return std::span<const float>(values).subspan(c * plane_size(), plane_size());
    }

    float& at(std::uint32_t c, std::uint32_t y, std::uint32_t x) { return values[c * plane_size() + y * width + x]; }
    float at(std::uint32_t c, std::uint32_t y, std::uint32_t x) const { return values[c * plane_size() + y * width + x]; }

    void validate() const {
        layout.validate();
        if (height == 0 || width == 0) fail(Errc::invalid_argument, "latent grid must have positive area");
        if (values.size() != static_cast<std::size_t>(layout.channels) * height * width)
            fail(Errc::invalid_argument, "value count does not match c*h*w");
        for (std::size_t i = 0; i < values.size(); ++i)
            if (!std::isfinite(values[i])) fail(Errc::non_finite_value, "latent value at index " + std::to_string(i));
    }

    bool operator==(const LatentTensor&) const = default;
};

/// 8-bit interleaved RGB, row-major.
struct ImageBuffer {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<std::uint8_t> pixels;

    static constexpr std::uint32_t kChannels = 3;

    ImageBuffer() = default;
    ImageBuffer(std::uint32_t h, std::uint32_t w, std::uint8_t fill = 0)
        : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * kChannels, fill) {}

    std::uint8_t& at(std::uint32_t y, std::uint32_t x, std::uint32_t ch) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * kChannels + ch];
    }
    std::uint8_t at(std::uint32_t y, std::uint32_t x, std::uint32_t ch) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * kChannels + ch];
    }

    bool empty() const noexcept { return height == 0 || width == 0; }
    bool operator==(const ImageBuffer&) const = default;
};

}  // namespace latentcodec
