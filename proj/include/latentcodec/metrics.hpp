#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "latentcodec/container.hpp"
#include "latentcodec/embedding.hpp"
#include "latentcodec/error.hpp"
#include "latentcodec/latent.hpp"

namespace latentcodec {

/// PSNR of identical images.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

namespace detail {
inline void check_same_dims(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.height != b.height || a.width != b.width || a.pixels.size() != b.pixels.size())
        fail(Errc::dimension_mismatch, std::to_string(a.height) + "x" + std::to_string(a.width) + " vs " + std::to_string(b.height) + "x" +
                                           std::to_string(b.width));
    if (a.empty()) fail(Errc::invalid_argument, "empty image");
}
}  // namespace detail

inline double mse(const ImageBuffer& ref, const ImageBuffer& test) {
    detail::check_same_dims(ref, test);
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.pixels.size(); ++i) {
        const double d = static_cast<double>(ref.pixels[i]) - static_cast<double>(test.pixels[i]);
        sum += d * d;
    }
    return sum / static_cast<double>(ref.pixels.size());
}

inline double psnr_from_mse(double m) { return m == 0.0 ? kPsnrIdentical : 10.0 * std::log10(255.0 * 255.0 / m); }

inline double psnr(const ImageBuffer& ref, const ImageBuffer& test) { return psnr_from_mse(mse(ref, test)); }

struct SsimParams {
    static constexpr int kWindow = 11;
    static constexpr double kSigma = 1.5;
    static constexpr double kK1 = 0.01;
    static constexpr double kK2 = 0.03;
    static constexpr double kRange = 255.0;
};

namespace detail {

inline std::array<double, SsimParams::kWindow> gaussian_taps() {
    std::array<double, SsimParams::kWindow> taps{};
    constexpr int r = SsimParams::kWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < SsimParams::kWindow; ++i) {
        const double d = i - r;
        taps[i] = std::exp(-(d * d) / (2.0 * SsimParams::kSigma * SsimParams::kSigma));
        sum += taps[i];
    }
    for (auto& t : taps) t /= sum;
    return taps;
}

/// Separable Gaussian filter over the valid region (no padding).
inline std::vector<double> filter_valid(const std::vector<double>& src, std::size_t h, std::size_t w) {
    static const auto taps = gaussian_taps();
    constexpr std::size_t k = SsimParams::kWindow;
    const std::size_t ow = w - k + 1, oh = h - k + 1;
    std::vector<double> horiz(h * ow);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += taps[t] * src[y * w + x + t];
            horiz[y * ow + x] = acc;
        }
    std::vector<double> out(oh * ow);
    for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += taps[t] * horiz[(y + t) * ow + x];
            out[y * ow + x] = acc;
        }
    return out;
}

}  // namespace detail

/// Mean SSIM with an 11x11 Gaussian window (sigma 1.5), per channel then averaged.
inline double ssim(const ImageBuffer& ref, const ImageBuffer& test) {
    detail::check_same_dims(ref, test);
    constexpr std::uint32_t k = SsimParams::kWindow;
    if (ref.height < k || ref.width < k) fail(Errc::dimension_mismatch, "SSIM needs images of at least 11x11 pixels");
    constexpr double c1 = (SsimParams::kK1 * SsimParams::kRange) * (SsimParams::kK1 * SsimParams::kRange);
    constexpr double c2 = (SsimParams::kK2 * SsimParams::kRange) * (SsimParams::kK2 * SsimParams::kRange);

    const std::size_t h = ref.height, w = ref.width, n = h * w;
    double total = 0.0;
    std::vector<double> a(n), b(n), aa(n), bb(n), ab(n);
    for (std::uint32_t ch = 0; ch < 3; ++ch) {
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = ref.pixels[i * 3 + ch];
            b[i] = test.pixels[i * 3 + ch];
            aa[i] = a[i] * a[i];
            bb[i] = b[i] * b[i];
            ab[i] = a[i] * b[i];
        }
        const auto mu_a = detail::filter_valid(a, h, w);
        const auto mu_b = detail::filter_valid(b, h, w);
        const auto e_aa = detail::filter_valid(aa, h, w);
        const auto e_bb = detail::filter_valid(bb, h, w);
        const auto e_ab = detail::filter_valid(ab, h, w);
        double sum = 0.0;
        for (std::size_t i = 0; i < mu_a.size(); ++i) {
            const double ma = mu_a[i], mb = mu_b[i];
            const double va = e_aa[i] - ma * ma;
            const double vb = e_bb[i] - mb * mb;
            const double cov = e_ab[i] - ma * mb;
            sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        }
        total += sum / static_cast<double>(mu_a.size());
    }
    return total / 3.0;
}

struct TileReport {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint64_t payload_bytes = 0;
    double psnr_db = 0.0;
};

struct RateDistortionReport {
    std::uint64_t payload_bytes = 0;
    std::uint64_t total_bytes = 0;
    double psnr_db = 0.0;
    double ssim = 0.0;
    std::optional<double> embed_cosine;
    std::optional<double> embed_l1;
    std::vector<TileReport> tiles;
};

using EmbeddingPair = std::pair<EmbeddingVector, EmbeddingVector>;

namespace detail {
inline ImageBuffer crop(const ImageBuffer& img, std::uint32_t y0, std::uint32_t x0, std::uint32_t h, std::uint32_t w) {
    ImageBuffer out(h, w);
    for (std::uint32_t y = 0; y < h; ++y)
        for (std::uint32_t x = 0; x < w; ++x)
            for (std::uint32_t ch = 0; ch < 3; ++ch) out.at(y, x, ch) = img.at(y0 + y, x0 + x, ch);
    return out;
}
}  // namespace detail

/// Embedding metrics appear only when a pair is supplied.
inline RateDistortionReport build_report(const ImageBuffer& original, const CompressedContainer& container, const ImageBuffer& reconstruction,
                                         const std::optional<EmbeddingPair>& embeddings = std::nullopt) {
    detail::check_same_dims(original, reconstruction);
    if (original.height != container.image_height || original.width != container.image_width)
        fail(Errc::dimension_mismatch, "container image dims differ from the original");

    RateDistortionReport rep;
    rep.payload_bytes = container.payload_bytes();
    rep.total_bytes = plc::total_bytes(container);
    rep.psnr_db = psnr(original, reconstruction);
    rep.ssim = ssim(original, reconstruction);
    if (embeddings) {
        rep.embed_cosine = embed_cosine(embeddings->first, embeddings->second);
        rep.embed_l1 = embed_l1(embeddings->first, embeddings->second);
    }
    for (std::uint32_t r = 0; r < container.rows; ++r) {
        for (std::uint32_t c = 0; c < container.cols; ++c) {
            const std::uint32_t y0 = r * container.tile_size, x0 = c * container.tile_size;
            const std::uint32_t h = std::min(container.tile_size, original.height - y0);
            const std::uint32_t w = std::min(container.tile_size, original.width - x0);
            TileReport t{r, c, container.tiles[static_cast<std::size_t>(r) * container.cols + c].size(),
                         psnr(detail::crop(original, y0, x0, h, w), detail::crop(reconstruction, y0, x0, h, w))};
            rep.tiles.push_back(t);
        }
    }
    return rep;
}

/// JSON number, or the string "inf" for the identical-image PSNR sentinel.
inline nlohmann::json psnr_json(double db) { return std::isinf(db) ? nlohmann::json("inf") : nlohmann::json(db); }

inline nlohmann::json to_json(const RateDistortionReport& rep) {
    nlohmann::json j;
    j["payload_bytes"] = rep.payload_bytes;
    j["total_bytes"] = rep.total_bytes;
    j["psnr_db"] = psnr_json(rep.psnr_db);
    j["ssim"] = rep.ssim;
    if (rep.embed_cosine) j["embed_cosine"] = *rep.embed_cosine;
    if (rep.embed_l1) j["embed_l1"] = *rep.embed_l1;
    auto& tiles = j["tiles"] = nlohmann::json::array();
    for (const auto& t : rep.tiles)
        tiles.push_back({{"row", t.row}, {"col", t.col}, {"payload_bytes", t.payload_bytes}, {"psnr_db", psnr_json(t.psnr_db)}});
    return j;
}

}  // namespace latentcodec
