#pragma once

// Little-endian field packing shared by every on-disk format.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "latentcodec/error.hpp"

namespace latentcodec {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kModelIdBytes = 16;

class ByteWriter {
public:
    void magic(std::string_view tag) { raw(tag.data(), tag.size()); }

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put_le(v); }
    void u32(std::uint32_t v) { put_le(v); }
    void u64(std::uint64_t v) { put_le(v); }
    void f32(float v) { put_le(std::bit_cast<std::uint32_t>(v)); }

    void f32s(std::span<const float> vs) {
        out_.reserve(out_.size() + vs.size() * 4);
        for (float v : vs) f32(v);
    }

    void bytes(std::span<const std::uint8_t> bs) { out_.insert(out_.end(), bs.begin(), bs.end()); }

    /// Zero-padded fixed-width identifier field.
    void fixed_string(std::string_view s, std::size_t width) {
        if (s.size() > width) fail(Errc::invalid_argument, "identifier longer than " + std::to_string(width) + " bytes");
        raw(s.data(), s.size());
        out_.insert(out_.end(), width - s.size(), 0);
    }

    std::size_t size() const noexcept { return out_.size(); }
    const Bytes& data() const noexcept { return out_; }
    Bytes take() { return std::move(out_); }

private:
    template <class T>
    void put_le(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void raw(const char* p, std::size_t n) {
        const auto* b = reinterpret_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }

    Bytes out_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

    bool has_magic(std::string_view tag) const {
        return in_.size() >= tag.size() && std::memcmp(in_.data(), tag.data(), tag.size()) == 0;
    }

    void skip(std::size_t n) { need(n); pos_ += n; }

    std::uint8_t u8() { need(1); return in_[pos_++]; }
    std::uint16_t u16() { return get_le<std::uint16_t>(); }
    std::uint32_t u32() { return get_le<std::uint32_t>(); }
    std::uint64_t u64() { return get_le<std::uint64_t>(); }
    float f32() { return std::bit_cast<float>(get_le<std::uint32_t>()); }

    void f32s(std::span<float> out) {
        need(out.size() * 4);
        for (float& v : out) v = f32();
    }

    std::span<const std::uint8_t> bytes(std::size_t n) {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::string fixed_string(std::size_t width) {
        auto s = bytes(width);
        std::size_t len = 0;
        while (len < width && s[len] != 0) ++len;
        return std::string(reinterpret_cast<const char*>(s.data()), len);
    }

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) fail(Errc::truncated_payload, "needed " + std::to_string(n) + " bytes at offset " + std::to_string(pos_) + ", have " + std::to_string(in_.size() - pos_));
    }

    template <class T>
    T get_le() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(in_[pos_ + i]) << (8 * i));
        pos_ += sizeof(T);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

inline Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::io_error, "cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(Errc::io_error, "read failed for " + path.string());
    return data;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io_error, "cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) fail(Errc::io_error, "write failed for " + path.string());
}

}  // namespace latentcodec
