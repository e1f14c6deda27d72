#pragma once

// Latent Interchange Format.
//
//   "LIF1" | u8 version=1 | u8 dtype=0 (f32 LE) | u16 reserved=0
//   u32 channels | u32 height | u32 width | u32 factor | char model_id[16]
//   channels*height*width f32, channel-major

#include "latentcodec/byte_io.hpp"
#include "latentcodec/latent.hpp"

namespace latentcodec::lif {

inline constexpr std::string_view kMagic = "LIF1";
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::uint8_t kDtypeF32 = 0;
inline constexpr std::size_t kHeaderBytes = 40;

inline Bytes write(const LatentTensor& t) {
    t.validate();
    ByteWriter w;
    w.magic(kMagic);
    w.u8(kVersion);
    w.u8(kDtypeF32);
    w.u16(0);
    w.u32(t.layout.channels);
    w.u32(t.height);
    w.u32(t.width);
    w.u32(t.layout.factor);
    w.fixed_string(t.layout.model_id, kModelIdBytes);
    w.f32s(t.values);
    return w.take();
}

inline LatentTensor read(std::span<const std::uint8_t> bytes) {
    if (!ByteReader(bytes).has_magic(kMagic)) fail(Errc::bad_magic, "not a LIF1 stream");
    ByteReader r(bytes);
    r.skip(kMagic.size());
    if (const auto v = r.u8(); v != kVersion) fail(Errc::unsupported_version, "LIF version " + std::to_string(v));
    if (const auto d = r.u8(); d != kDtypeF32) fail(Errc::unsupported_dtype, "LIF dtype " + std::to_string(d));
    r.u16();
    LatentLayout layout;
    const auto channels = r.u32();
    const auto height = r.u32();
    const auto width = r.u32();
    layout.factor = r.u32();
    layout.channels = channels;
    layout.model_id = r.fixed_string(kModelIdBytes);
    layout.validate();
    if (height == 0 || width == 0) fail(Errc::invalid_argument, "LIF grid has zero area");

    const std::uint64_t declared = latent_byte_size(layout, {height, width}, QuantMode::raw_f32);
    if (r.remaining() < declared)
        fail(Errc::truncated_payload, "LIF payload has " + std::to_string(r.remaining()) + " of " + std::to_string(declared) + " bytes");
    if (r.remaining() > declared) fail(Errc::trailing_data, std::to_string(r.remaining() - declared) + " bytes after LIF payload");

    LatentTensor t(std::move(layout), height, width);
    r.f32s(t.values);
    t.validate();
    return t;
}

}  // namespace latentcodec::lif
