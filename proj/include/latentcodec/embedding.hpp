#pragma once

// Foundation-model embeddings supplied from outside the codec, and the
// Embedding Exchange Format used to ship them:
//
//   "EEF1" | u8 version=1 | u8 dtype=0 (f32 LE) | u16 reserved=0
//   u32 dim | char embedder_id[16] | dim f32

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latentcodec/byte_io.hpp"
#include "latentcodec/error.hpp"

namespace latentcodec {

struct EmbeddingVector {
    std::vector<float> values;
    std::string embedder_id;

    std::size_t dim() const noexcept { return values.size(); }

    void validate() const {
        if (values.empty()) fail(Errc::invalid_argument, "embedding has no coordinates");
        for (float v : values)
            if (!std::isfinite(v)) fail(Errc::non_finite_value, "embedding coordinate");
    }

    bool operator==(const EmbeddingVector&) const = default;
};

namespace detail {
inline void check_same_dim(const EmbeddingVector& a, const EmbeddingVector& b) {
    a.validate();
    b.validate();
    if (a.dim() != b.dim()) fail(Errc::dimension_mismatch, "embedding dims " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}
}  // namespace detail

inline double embed_cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    detail::check_same_dim(a, b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double x = a.values[i], y = b.values[i];
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if (na == 0.0 || nb == 0.0) fail(Errc::zero_vector, "cosine similarity of a zero embedding");
    const double cos = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(cos, -1.0, 1.0);
}

inline double embed_l1(const EmbeddingVector& a, const EmbeddingVector& b) {
    detail::check_same_dim(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += std::abs(static_cast<double>(a.values[i]) - static_cast<double>(b.values[i]));
    return sum;
}

namespace eef {

inline constexpr std::string_view kMagic = "EEF1";
inline constexpr std::uint8_t kVersion = 1;

inline Bytes write(const EmbeddingVector& e) {
    e.validate();
    ByteWriter w;
    w.magic(kMagic);
    w.u8(kVersion);
    w.u8(0);
    w.u16(0);
    w.u32(static_cast<std::uint32_t>(e.dim()));
    w.fixed_string(e.embedder_id, kModelIdBytes);
    w.f32s(e.values);
    return w.take();
}

inline EmbeddingVector read(std::span<const std::uint8_t> bytes) {
    if (!ByteReader(bytes).has_magic(kMagic)) fail(Errc::bad_magic, "not an EEF1 stream");
    ByteReader r(bytes);
    r.skip(kMagic.size());
    if (const auto v = r.u8(); v != kVersion) fail(Errc::unsupported_version, "EEF version " + std::to_string(v));
    if (const auto d = r.u8(); d != 0) fail(Errc::unsupported_dtype, "EEF dtype " + std::to_string(d));
    r.u16();
    const auto dim = r.u32();
    EmbeddingVector e;
    e.embedder_id = r.fixed_string(kModelIdBytes);
    if (dim == 0) fail(Errc::corrupt_payload, "EEF dim is zero");
    if (r.remaining() < std::uint64_t{dim} * 4) fail(Errc::truncated_payload, "EEF payload incomplete");
    if (r.remaining() > std::uint64_t{dim} * 4) fail(Errc::trailing_data, "bytes after EEF payload");
    e.values.resize(dim);
    r.f32s(e.values);
    e.validate();
    return e;
}

}  // namespace eef

}  // namespace latentcodec
