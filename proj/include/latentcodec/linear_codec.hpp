#pragma once

// Patch-PCA autoencoder: every f x f RGB patch maps to c principal-component
// coefficients, giving latent grids with the same (f, c) geometry as the
// diffusion-model autoencoders it stands in for.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "latentcodec/byte_io.hpp"
#include "latentcodec/error.hpp"
#include "latentcodec/latent.hpp"
#include "latentcodec/quantizer.hpp"

namespace latentcodec {

struct LinearCodecStats {
    std::uint64_t sample_count = 0;
    double retained_variance_fraction = 0.0;
};

struct LinearCodecModel {
    LatentLayout layout;
    std::uint32_t patch_dim = 0;
    std::vector<float> mean;
    /// channels rows of patch_dim, orthonormal.
    std::vector<float> components;
    LinearCodecStats train_stats;

    std::span<const float> component(std::uint32_t c) const {
        return std::span<const float>(components).subspan(static_cast<std::size_t>(c) * patch_dim, patch_dim);
    }

    void validate() const {
        layout.validate();
        if (patch_dim != 3 * layout.factor * layout.factor) fail(Errc::invalid_argument, "patch_dim must equal 3*f^2");
        if (layout.channels > patch_dim) fail(Errc::invalid_argument, "channels exceed patch dimension");
        if (mean.size() != patch_dim) fail(Errc::invalid_argument, "mean length");
        if (components.size() != static_cast<std::size_t>(layout.channels) * patch_dim) fail(Errc::invalid_argument, "component matrix size");
        for (float v : mean)
            if (!std::isfinite(v)) fail(Errc::non_finite_value, "model mean");
        for (float v : components)
            if (!std::isfinite(v)) fail(Errc::non_finite_value, "model component");
    }
};

/// Real-valued RGB canvas in [0, 1] units (before clamping and 8-bit rounding).
struct UnitImage {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<double> data;

    double at(std::uint32_t y, std::uint32_t x, std::uint32_t ch) const {
        return data[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
    }
};

namespace detail {

/// Mirror index without repeating the edge sample.
inline std::uint32_t reflect_index(std::int64_t i, std::uint32_t n) {
    if (n == 1) return 0;
    const std::int64_t period = 2 * (static_cast<std::int64_t>(n) - 1);
    i %= period;
    if (i < 0) i += period;
    return static_cast<std::uint32_t>(i < n ? i : period - i);
}

/// Patch vector index for pixel (dy, dx) and colour channel ch.
inline std::size_t patch_offset(std::uint32_t f, std::uint32_t dy, std::uint32_t dx, std::uint32_t ch) {
    return (static_cast<std::size_t>(dy) * f + dx) * 3 + ch;
}

template <class Sampler>
void gather_patch(std::uint32_t f, std::uint32_t gy, std::uint32_t gx, std::uint32_t height, std::uint32_t width,
                  Sampler&& sample, std::span<double> out) {
    for (std::uint32_t dy = 0; dy < f; ++dy) {
        const auto y = reflect_index(static_cast<std::int64_t>(gy) * f + dy, height);
        for (std::uint32_t dx = 0; dx < f; ++dx) {
            const auto x = reflect_index(static_cast<std::int64_t>(gx) * f + dx, width);
            for (std::uint32_t ch = 0; ch < 3; ++ch) out[patch_offset(f, dy, dx, ch)] = sample(y, x, ch);
        }
    }
}

template <class Sampler>
LatentTensor encode_with(const LinearCodecModel& model, std::uint32_t height, std::uint32_t width, Sampler&& sample) {
    const auto grid = latent_grid_for_image(model.layout, height, width);
    LatentTensor latent(model.layout, grid.height, grid.width);
    const std::uint32_t f = model.layout.factor;
    std::vector<double> patch(model.patch_dim);
    for (std::uint32_t gy = 0; gy < grid.height; ++gy) {
        for (std::uint32_t gx = 0; gx < grid.width; ++gx) {
            gather_patch(f, gy, gx, height, width, sample, patch);
            for (std::uint32_t d = 0; d < model.patch_dim; ++d) patch[d] -= model.mean[d];
            for (std::uint32_t c = 0; c < model.layout.channels; ++c) {
                auto comp = model.component(c);
                double z = 0.0;
                for (std::uint32_t d = 0; d < model.patch_dim; ++d) z += comp[d] * patch[d];
                latent.at(c, gy, gx) = static_cast<float>(z);
            }
        }
    }
    return latent;
}

inline void canonicalize_sign(Eigen::Ref<Eigen::VectorXd> v) {
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0) v = -v;
}

}  // namespace detail

/// Fits the mean patch and top-c principal directions over (optionally subsampled) patches.
inline LinearCodecModel fit_linear_codec(std::span<const ImageBuffer> images, const LatentLayout& layout, std::uint64_t seed,
                                         std::size_t max_patches) {
    layout.validate();
    const std::uint32_t f = layout.factor;
    const std::uint32_t dim = 3 * f * f;
    if (layout.channels > dim)
        fail(Errc::invalid_argument, "channels " + std::to_string(layout.channels) + " exceed 3*f^2 = " + std::to_string(dim));
    if (max_patches < 1) fail(Errc::invalid_argument, "max_patches must be positive");

    // Reservoir over (image, row, col) patch positions.
    struct Pos {
        std::uint32_t image, gy, gx;
    };
    detail::SeededRng rng(seed);
    std::vector<Pos> picked;
    std::uint64_t seen = 0;
    for (std::uint32_t i = 0; i < images.size(); ++i) {
        if (images[i].empty()) continue;
        const auto grid = latent_grid_for_image(layout, images[i].height, images[i].width);
        for (std::uint32_t gy = 0; gy < grid.height; ++gy) {
            for (std::uint32_t gx = 0; gx < grid.width; ++gx) {
                ++seen;
                if (picked.size() < max_patches) {
                    picked.push_back({i, gy, gx});
                } else if (const auto j = rng.below(seen); j < max_patches) {
                    picked[j] = {i, gy, gx};
                }
            }
        }
    }
    const std::size_t n = picked.size();
    if (n < static_cast<std::size_t>(layout.channels) + 1)
        fail(Errc::too_few_patches, std::to_string(n) + " patches for " + std::to_string(layout.channels) + " channels");

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), dim);
    std::vector<double> patch(dim);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& p = picked[r];
        const ImageBuffer& img = images[p.image];
        detail::gather_patch(f, p.gy, p.gx, img.height, img.width,
                             [&](std::uint32_t y, std::uint32_t xx, std::uint32_t ch) { return img.at(y, xx, ch) / 255.0; }, patch);
        for (std::uint32_t d = 0; d < dim; ++d) x(static_cast<Eigen::Index>(r), d) = patch[d];
    }
    const Eigen::RowVectorXd mu = x.colwise().mean();
    x.rowwise() -= mu;

    const double total_variance = x.squaredNorm() / static_cast<double>(n);
    if (!(total_variance > 1e-12)) fail(Errc::degenerate_variance, "training patches have no variance");

    const Eigen::Index c = layout.channels;
    Eigen::MatrixXd basis(dim, c);
    double retained = 0.0;
    bool solved = false;

    if (static_cast<Eigen::Index>(n) < static_cast<Eigen::Index>(dim)) {
        // Fewer samples than dimensions: decompose the n x n Gram matrix instead.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x * x.transpose());
        const auto& vals = es.eigenvalues();
        const Eigen::Index top = vals.size() - 1;
        if (c <= vals.size() && vals[top - c + 1] > 1e-10 * std::max(vals[top], 1e-300)) {
            for (Eigen::Index j = 0; j < c; ++j) {
                const double lambda = vals[top - j];
                basis.col(j) = x.transpose() * es.eigenvectors().col(top - j) / std::sqrt(lambda);
                retained += lambda / static_cast<double>(n);
            }
            solved = true;
        }
    }
    if (!solved) {
        Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        const auto& vals = es.eigenvalues();
        const Eigen::Index top = vals.size() - 1;
        retained = 0.0;
        for (Eigen::Index j = 0; j < c; ++j) {
            basis.col(j) = es.eigenvectors().col(top - j);
            retained += std::max(0.0, vals[top - j]);
        }
    }

    // Modified Gram-Schmidt tidies the Gram-route vectors; a no-op up to rounding otherwise.
    for (Eigen::Index j = 0; j < c; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) basis.col(j) -= basis.col(i).dot(basis.col(j)) * basis.col(i);
        basis.col(j).normalize();
        detail::canonicalize_sign(basis.col(j));
    }

    LinearCodecModel model;
    model.layout = layout;
    model.patch_dim = dim;
    model.mean.resize(dim);
    for (std::uint32_t d = 0; d < dim; ++d) model.mean[d] = static_cast<float>(mu[d]);
    model.components.resize(static_cast<std::size_t>(c) * dim);
    for (Eigen::Index j = 0; j < c; ++j)
        for (std::uint32_t d = 0; d < dim; ++d) model.components[static_cast<std::size_t>(j) * dim + d] = static_cast<float>(basis(d, j));
    model.train_stats.sample_count = n;
    model.train_stats.retained_variance_fraction = std::min(1.0, retained / total_variance);
    return model;
}

inline LatentTensor encode(const LinearCodecModel& model, const ImageBuffer& image) {
    if (image.empty()) fail(Errc::invalid_argument, "cannot encode an empty image");
    return detail::encode_with(model, image.height, image.width,
                               [&](std::uint32_t y, std::uint32_t x, std::uint32_t ch) { return image.at(y, x, ch) / 255.0; });
}

inline LatentTensor encode(const LinearCodecModel& model, const UnitImage& image) {
    if (image.height == 0 || image.width == 0) fail(Errc::invalid_argument, "cannot encode an empty image");
    return detail::encode_with(model, image.height, image.width,
                               [&](std::uint32_t y, std::uint32_t x, std::uint32_t ch) { return image.at(y, x, ch); });
}

/// Unclamped reconstruction of the full latent canvas (grid * f on each axis).
inline UnitImage reconstruct_unit(const LinearCodecModel& model, const LatentTensor& latent) {
    if (!latent.layout.same_geometry(model.layout))
        fail(Errc::layout_mismatch, "latent f" + std::to_string(latent.layout.factor) + "c" + std::to_string(latent.layout.channels) +
                                        " vs model f" + std::to_string(model.layout.factor) + "c" + std::to_string(model.layout.channels));
    const std::uint32_t f = model.layout.factor;
    UnitImage out{latent.height * f, latent.width * f, {}};
    out.data.assign(static_cast<std::size_t>(out.height) * out.width * 3, 0.0);
    std::vector<double> patch(model.patch_dim);
    for (std::uint32_t gy = 0; gy < latent.height; ++gy) {
        for (std::uint32_t gx = 0; gx < latent.width; ++gx) {
            for (std::uint32_t d = 0; d < model.patch_dim; ++d) patch[d] = model.mean[d];
            for (std::uint32_t c = 0; c < model.layout.channels; ++c) {
                const double z = latent.at(c, gy, gx);
                auto comp = model.component(c);
                for (std::uint32_t d = 0; d < model.patch_dim; ++d) patch[d] += comp[d] * z;
            }
            for (std::uint32_t dy = 0; dy < f; ++dy)
                for (std::uint32_t dx = 0; dx < f; ++dx)
                    for (std::uint32_t ch = 0; ch < 3; ++ch)
                        out.data[((static_cast<std::size_t>(gy) * f + dy) * out.width + gx * f + dx) * 3 + ch] =
                            patch[detail::patch_offset(f, dy, dx, ch)];
        }
    }
    return out;
}

inline std::uint8_t to_8bit(double unit) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
}

inline ImageBuffer decode(const LinearCodecModel& model, const LatentTensor& latent, std::uint32_t out_height, std::uint32_t out_width) {
    const UnitImage canvas = reconstruct_unit(model, latent);
    if (out_height == 0 || out_width == 0 || out_height > canvas.height || out_width > canvas.width)
        fail(Errc::dimension_mismatch, "output " + std::to_string(out_height) + "x" + std::to_string(out_width) + " does not fit latent canvas " +
                                           std::to_string(canvas.height) + "x" + std::to_string(canvas.width));
    ImageBuffer img(out_height, out_width);
    for (std::uint32_t y = 0; y < out_height; ++y)
        for (std::uint32_t x = 0; x < out_width; ++x)
            for (std::uint32_t ch = 0; ch < 3; ++ch) img.at(y, x, ch) = to_8bit(canvas.at(y, x, ch));
    return img;
}

namespace pca {

inline constexpr std::string_view kMagic = "PCA1";
inline constexpr std::uint8_t kVersion = 1;

/// PCA1: magic | u8 version | u32 f | u32 c | u32 patch_dim | char model_id[16] | mean | components.
inline Bytes write(const LinearCodecModel& model) {
    model.validate();
    ByteWriter w;
    w.magic(kMagic);
    w.u8(kVersion);
    w.u32(model.layout.factor);
    w.u32(model.layout.channels);
    w.u32(model.patch_dim);
    w.fixed_string(model.layout.model_id, kModelIdBytes);
    w.f32s(model.mean);
    w.f32s(model.components);
    return w.take();
}

inline LinearCodecModel read(std::span<const std::uint8_t> bytes) {
    if (!ByteReader(bytes).has_magic(kMagic)) fail(Errc::bad_magic, "not a PCA1 stream");
    ByteReader r(bytes);
    r.skip(kMagic.size());
    if (const auto v = r.u8(); v != kVersion) fail(Errc::unsupported_version, "PCA1 version " + std::to_string(v));
    LinearCodecModel model;
    model.layout.factor = r.u32();
    model.layout.channels = r.u32();
    model.patch_dim = r.u32();
    model.layout.model_id = r.fixed_string(kModelIdBytes);
    model.layout.validate();
    if (model.patch_dim != 3 * model.layout.factor * model.layout.factor) fail(Errc::corrupt_payload, "patch_dim does not equal 3*f^2");
    if (model.layout.channels > model.patch_dim) fail(Errc::corrupt_payload, "channels exceed patch_dim");
    const std::size_t expected = (static_cast<std::size_t>(model.patch_dim) * (1 + model.layout.channels)) * 4;
    if (r.remaining() < expected) fail(Errc::truncated_payload, "PCA1 payload incomplete");
    if (r.remaining() > expected) fail(Errc::trailing_data, "bytes after PCA1 payload");
    model.mean.resize(model.patch_dim);
    model.components.resize(static_cast<std::size_t>(model.layout.channels) * model.patch_dim);
    r.f32s(model.mean);
    r.f32s(model.components);
    model.validate();
    return model;
}

}  // namespace pca

}  // namespace latentcodec
