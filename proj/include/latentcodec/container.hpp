#pragma once

// PLC1 tiled container.
//
//   "PLC1" | u8 version=1 | u8 mode | u8 codebook scope | u8 reserved=0
//   u32 f | u32 c | u32 tile_size | u32 rows | u32 cols | u32 height | u32 width
//   char model_id[16]
//   dictionary: none (raw) | f32 min, f32 max (int8) | units x 256 f32 (kmeans)
//   rows*cols tile payloads, raster order, constant length
//   u32 CRC-32 (IEEE) over all preceding bytes

#include <zlib.h>

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "latentcodec/byte_io.hpp"
#include "latentcodec/error.hpp"
#include "latentcodec/latent.hpp"
#include "latentcodec/linear_codec.hpp"
#include "latentcodec/quantizer.hpp"

namespace latentcodec {

using Dictionary = std::variant<std::monostate, Int8Range, Codebook>;

struct CompressedContainer {
    std::uint8_t version = 1;
    QuantMode mode = QuantMode::raw_f32;
    LatentLayout layout;
    std::uint32_t tile_size = 256;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::uint32_t image_height = 0;
    std::uint32_t image_width = 0;
    Dictionary dictionary;
    /// rows*cols payloads in raster order.
    std::vector<Bytes> tiles;

    GridDims tile_grid() const noexcept { return {tile_size / layout.factor, tile_size / layout.factor}; }

    std::uint64_t tile_payload_bytes() const { return latent_byte_size(layout, tile_grid(), mode); }

    std::uint64_t payload_bytes() const {
        std::uint64_t total = 0;
        for (const auto& t : tiles) total += t.size();
        return total;
    }
};

namespace detail {

inline std::uint32_t crc32_ieee(std::span<const std::uint8_t> data) {
    uLong crc = crc32_z(0L, Z_NULL, 0);
    crc = crc32_z(crc, data.data(), data.size());
    return static_cast<std::uint32_t>(crc);
}

inline void check_dictionary(QuantMode mode, const Dictionary& dict, const LatentLayout& layout) {
    switch (mode) {
    case QuantMode::raw_f32:
        if (!std::holds_alternative<std::monostate>(dict)) fail(Errc::mode_mismatch, "raw mode takes no dictionary");
        break;
    case QuantMode::static_int8:
        if (!std::holds_alternative<Int8Range>(dict)) fail(Errc::mode_mismatch, "int8 mode needs an int8 range");
        std::get<Int8Range>(dict).validate();
        break;
    case QuantMode::kmeans_8bit:
        if (!std::holds_alternative<Codebook>(dict)) fail(Errc::mode_mismatch, "kmeans mode needs a codebook");
        check_codebook_compatible(std::get<Codebook>(dict), layout);
        break;
    }
}

inline std::uint64_t dictionary_bytes(QuantMode mode, CodebookScope scope, std::uint32_t channels) {
    switch (mode) {
    case QuantMode::raw_f32: return 0;
    case QuantMode::static_int8: return 8;
    case QuantMode::kmeans_8bit: return (scope == CodebookScope::global ? 1u : channels) * std::uint64_t{kCodebookSize} * 4;
    }
    return 0;
}

inline constexpr std::size_t kPlcHeaderBytes = 4 + 4 + 7 * 4 + kModelIdBytes;

inline void check_tiling(const LatentLayout& layout, std::uint32_t tile_size) {
    if (tile_size == 0 || tile_size % layout.factor != 0)
        fail(Errc::invalid_argument, "tile_size " + std::to_string(tile_size) + " is not a positive multiple of f=" + std::to_string(layout.factor));
}

inline std::uint32_t tiles_along(std::uint32_t extent, std::uint32_t tile) { return (extent + tile - 1) / tile; }

}  // namespace detail

/// tile_size x tile_size block at tile (row, col), border tiles reflection padded against the whole image.
inline ImageBuffer extract_tile(const ImageBuffer& image, std::uint32_t row, std::uint32_t col, std::uint32_t tile_size) {
    ImageBuffer tile(tile_size, tile_size);
    for (std::uint32_t y = 0; y < tile_size; ++y) {
        const auto sy = detail::reflect_index(static_cast<std::int64_t>(row) * tile_size + y, image.height);
        for (std::uint32_t x = 0; x < tile_size; ++x) {
            const auto sx = detail::reflect_index(static_cast<std::int64_t>(col) * tile_size + x, image.width);
            for (std::uint32_t ch = 0; ch < 3; ++ch) tile.at(y, x, ch) = image.at(sy, sx, ch);
        }
    }
    return tile;
}

inline Bytes pack_latent(const LatentTensor& latent, QuantMode mode, const Dictionary& dict) {
    switch (mode) {
    case QuantMode::raw_f32: {
        ByteWriter w;
        w.f32s(latent.values);
        return w.take();
    }
    case QuantMode::static_int8: return quantize_int8(latent, std::get<Int8Range>(dict)).indices;
    case QuantMode::kmeans_8bit: return quantize_kmeans(latent, std::get<Codebook>(dict)).indices;
    }
    return {};
}

inline LatentTensor unpack_latent(std::span<const std::uint8_t> payload, const LatentLayout& layout, GridDims grid, QuantMode mode,
                                  const Dictionary& dict) {
    if (payload.size() != latent_byte_size(layout, grid, mode)) fail(Errc::corrupt_payload, "payload length");
    switch (mode) {
    case QuantMode::raw_f32: {
        LatentTensor t(layout, grid.height, grid.width);
        ByteReader r(payload);
        r.f32s(t.values);
        return t;
    }
    case QuantMode::static_int8:
        return dequantize(QuantizedLatent{layout, grid, mode, {payload.begin(), payload.end()}}, std::get<Int8Range>(dict));
    case QuantMode::kmeans_8bit:
        return dequantize(QuantizedLatent{layout, grid, mode, {payload.begin(), payload.end()}}, std::get<Codebook>(dict));
    }
    return {};
}

/// Encodes and quantizes every tile independently; the dictionary is stored once.
inline CompressedContainer compress_image(const ImageBuffer& image, const LinearCodecModel& model, QuantMode mode, Dictionary dictionary,
                                          std::uint32_t tile_size = 256) {
    if (image.empty()) fail(Errc::invalid_argument, "cannot compress an empty image");
    detail::check_tiling(model.layout, tile_size);
    detail::check_dictionary(mode, dictionary, model.layout);

    CompressedContainer out;
    out.mode = mode;
    out.layout = model.layout;
    out.tile_size = tile_size;
    out.image_height = image.height;
    out.image_width = image.width;
    out.rows = detail::tiles_along(image.height, tile_size);
    out.cols = detail::tiles_along(image.width, tile_size);
    out.dictionary = std::move(dictionary);
    out.tiles.reserve(static_cast<std::size_t>(out.rows) * out.cols);
    for (std::uint32_t r = 0; r < out.rows; ++r)
        for (std::uint32_t c = 0; c < out.cols; ++c)
            out.tiles.push_back(pack_latent(encode(model, extract_tile(image, r, c, tile_size)), mode, out.dictionary));
    return out;
}

inline void check_container(const CompressedContainer& c) {
    if (c.image_height == 0 || c.image_width == 0) fail(Errc::invalid_argument, "container has an empty tile grid");
    c.layout.validate();
    detail::check_tiling(c.layout, c.tile_size);
    if (c.rows != detail::tiles_along(c.image_height, c.tile_size) || c.cols != detail::tiles_along(c.image_width, c.tile_size))
        fail(Errc::corrupt_payload, "tile grid does not cover the image dims");
    detail::check_dictionary(c.mode, c.dictionary, c.layout);
    if (c.tiles.size() != static_cast<std::size_t>(c.rows) * c.cols)
        fail(Errc::corrupt_payload, "expected " + std::to_string(c.rows * c.cols) + " tiles, found " + std::to_string(c.tiles.size()));
    const auto expect = c.tile_payload_bytes();
    for (std::size_t i = 0; i < c.tiles.size(); ++i)
        if (c.tiles[i].size() != expect)
            fail(Errc::corrupt_payload, "tile " + std::to_string(i) + " holds " + std::to_string(c.tiles[i].size()) + " of " + std::to_string(expect) + " bytes");
}

/// Decodes one tile, cropped to the part that lies inside the image.
inline ImageBuffer decompress_tile(const CompressedContainer& c, const LinearCodecModel& model, std::uint32_t row, std::uint32_t col) {
    if (!c.layout.same_geometry(model.layout))
        fail(Errc::layout_mismatch, "container f" + std::to_string(c.layout.factor) + "c" + std::to_string(c.layout.channels) + " vs model f" +
                                        std::to_string(model.layout.factor) + "c" + std::to_string(model.layout.channels));
    if (row >= c.rows || col >= c.cols) fail(Errc::invalid_argument, "tile index outside grid");
    const std::size_t index = static_cast<std::size_t>(row) * c.cols + col;
    if (index >= c.tiles.size()) fail(Errc::corrupt_payload, "tile " + std::to_string(index) + " missing");
    const auto& payload = c.tiles[index];
    if (payload.size() != c.tile_payload_bytes())
        fail(Errc::corrupt_payload, "tile " + std::to_string(index) + " holds " + std::to_string(payload.size()) + " of " +
                                        std::to_string(c.tile_payload_bytes()) + " bytes");
    const LatentTensor latent = unpack_latent(payload, model.layout, c.tile_grid(), c.mode, c.dictionary);
    const std::uint32_t h = std::min(c.tile_size, c.image_height - row * c.tile_size);
    const std::uint32_t w = std::min(c.tile_size, c.image_width - col * c.tile_size);
    return decode(model, latent, h, w);
}

inline ImageBuffer decompress_image(const CompressedContainer& c, const LinearCodecModel& model) {
    if (!c.layout.same_geometry(model.layout))
        fail(Errc::layout_mismatch, "container f" + std::to_string(c.layout.factor) + "c" + std::to_string(c.layout.channels) + " vs model f" +
                                        std::to_string(model.layout.factor) + "c" + std::to_string(model.layout.channels));
    check_container(c);
    ImageBuffer out(c.image_height, c.image_width);
    for (std::uint32_t r = 0; r < c.rows; ++r) {
        for (std::uint32_t col = 0; col < c.cols; ++col) {
            const ImageBuffer tile = decompress_tile(c, model, r, col);
            for (std::uint32_t y = 0; y < tile.height; ++y) {
                const auto* src = &tile.pixels[static_cast<std::size_t>(y) * tile.width * 3];
                auto* dst = &out.pixels[((static_cast<std::size_t>(r) * c.tile_size + y) * out.width + col * c.tile_size) * 3];
                std::copy(src, src + static_cast<std::size_t>(tile.width) * 3, dst);
            }
        }
    }
    return out;
}

namespace plc {

inline constexpr std::string_view kMagic = "PLC1";
inline constexpr std::uint8_t kVersion = 1;

inline Bytes write(const CompressedContainer& c) {
    if (c.version != kVersion) fail(Errc::unsupported_version, "PLC version " + std::to_string(c.version));
    check_container(c);
    ByteWriter w;
    w.magic(kMagic);
    w.u8(c.version);
    w.u8(static_cast<std::uint8_t>(c.mode));
    const auto* cb = std::get_if<Codebook>(&c.dictionary);
    w.u8(cb ? static_cast<std::uint8_t>(cb->scope) : 0);
    w.u8(0);
    for (std::uint32_t v : {c.layout.factor, c.layout.channels, c.tile_size, c.rows, c.cols, c.image_height, c.image_width}) w.u32(v);
    w.fixed_string(c.layout.model_id, kModelIdBytes);
    if (const auto* range = std::get_if<Int8Range>(&c.dictionary)) {
        w.f32(range->min);
        w.f32(range->max);
    } else if (cb) {
        for (std::uint32_t u = 0; u < cb->units(); ++u) {
            auto b = cb->block(u);
            w.f32s(b);
            for (std::uint32_t i = cb->k; i < kCodebookSize; ++i) w.f32(b.back());
        }
    }
    for (const auto& t : c.tiles) w.bytes(t);
    w.u32(detail::crc32_ieee(w.data()));
    return w.take();
}

inline CompressedContainer read(std::span<const std::uint8_t> bytes) {
    if (!ByteReader(bytes).has_magic(kMagic)) fail(Errc::bad_magic, "not a PLC1 stream");
    if (bytes.size() < detail::kPlcHeaderBytes + 4) fail(Errc::truncated_payload, "PLC1 header incomplete");
    ByteReader r(bytes);
    r.skip(kMagic.size());
    CompressedContainer c;
    c.version = r.u8();
    if (c.version != kVersion) fail(Errc::unsupported_version, "PLC version " + std::to_string(c.version));
    const auto mode = r.u8();
    if (mode > 2) fail(Errc::unsupported_mode, "PLC mode " + std::to_string(mode));
    c.mode = static_cast<QuantMode>(mode);
    const auto scope = r.u8();
    if (scope > 1 || (scope != 0 && c.mode != QuantMode::kmeans_8bit)) fail(Errc::unsupported_mode, "codebook scope " + std::to_string(scope));
    if (const auto reserved = r.u8(); reserved != 0) fail(Errc::unsupported_mode, "reserved flags " + std::to_string(reserved));
    c.layout.factor = r.u32();
    c.layout.channels = r.u32();
    c.tile_size = r.u32();
    c.rows = r.u32();
    c.cols = r.u32();
    c.image_height = r.u32();
    c.image_width = r.u32();
    c.layout.model_id = r.fixed_string(kModelIdBytes);
    try {
        c.layout.validate();
        detail::check_tiling(c.layout, c.tile_size);
    } catch (const CodecError& e) {
        fail(Errc::corrupt_payload, e.what());
    }
    if (c.image_height == 0 || c.image_width == 0) fail(Errc::corrupt_payload, "empty image dims");
    if (c.rows != detail::tiles_along(c.image_height, c.tile_size) || c.cols != detail::tiles_along(c.image_width, c.tile_size))
        fail(Errc::corrupt_payload, "tile grid does not cover the image dims");

    const auto cb_scope = static_cast<CodebookScope>(scope);
    const std::uint64_t dict_bytes = detail::dictionary_bytes(c.mode, cb_scope, c.layout.channels);
    const std::uint64_t tile_bytes = c.tile_payload_bytes();
    const std::uint64_t tile_count = detail::checked_mul(c.rows, c.cols);
    const std::uint64_t payload_start = detail::kPlcHeaderBytes + dict_bytes;
    const std::uint64_t expected = payload_start + detail::checked_mul(tile_count, tile_bytes) + 4;
    if (bytes.size() < expected) {
        const std::uint64_t body = bytes.size() >= payload_start + 4 ? bytes.size() - 4 - payload_start : 0;
        if (bytes.size() < payload_start + 4) fail(Errc::truncated_payload, "PLC1 dictionary incomplete");
        fail(Errc::corrupt_payload, "tile " + std::to_string(std::min(body / tile_bytes, tile_count - 1)) + " truncated (" +
                                        std::to_string(bytes.size()) + " of " + std::to_string(expected) + " bytes)");
    }
    if (bytes.size() > expected) fail(Errc::trailing_data, std::to_string(bytes.size() - expected) + " bytes after PLC1 trailer");

    const auto body = bytes.first(bytes.size() - 4);
    ByteReader trailer(bytes.last(4));
    if (trailer.u32() != detail::crc32_ieee(body)) fail(Errc::checksum_mismatch, "PLC1 CRC-32 does not match contents");

    if (c.mode == QuantMode::static_int8) {
        Int8Range range;
        range.min = r.f32();
        range.max = r.f32();
        c.dictionary = range;
    } else if (c.mode == QuantMode::kmeans_8bit) {
        Codebook cb;
        cb.scope = cb_scope;
        cb.channels = cb_scope == CodebookScope::global ? 1 : c.layout.channels;
        cb.centroids.resize(static_cast<std::size_t>(cb.units()) * kCodebookSize);
        r.f32s(cb.centroids);
        for (std::uint32_t u = 0; u < cb.units(); ++u) {
            auto b = cb.block(u);
            for (std::size_t i = 1; i < b.size(); ++i)
                if (b[i] == b[i - 1]) cb.degenerate = true;
        }
        c.dictionary = std::move(cb);
    }
    c.tiles.reserve(tile_count);
    for (std::uint64_t i = 0; i < tile_count; ++i) {
        auto t = r.bytes(tile_bytes);
        c.tiles.emplace_back(t.begin(), t.end());
    }
    check_container(c);
    return c;
}

/// Bytes outside the tile payloads: header, dictionary and trailer.
inline std::uint64_t overhead_bytes(const CompressedContainer& c) {
    const auto* cb = std::get_if<Codebook>(&c.dictionary);
    return detail::kPlcHeaderBytes + detail::dictionary_bytes(c.mode, cb ? cb->scope : CodebookScope::global, c.layout.channels) + 4;
}

inline std::uint64_t total_bytes(const CompressedContainer& c) { return overhead_bytes(c) + c.payload_bytes(); }

}  // namespace plc

}  // namespace latentcodec
