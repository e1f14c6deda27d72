#pragma once

// Scalar quantization of latent values: learned K-means codebooks and
// static uniform int8 binning.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "latentcodec/byte_io.hpp"
#include "latentcodec/error.hpp"
#include "latentcodec/latent.hpp"

namespace latentcodec {

inline constexpr std::uint32_t kCodebookSize = 256;

enum class CodebookScope : std::uint8_t { global = 0, per_channel = 1 };

/// Sorted scalar centroids, one block per scope unit.
struct Codebook {
    CodebookScope scope = CodebookScope::global;
    std::uint32_t channels = 1;
    /// Centroids per unit. 256 in production; smaller only for oracle tests.
    std::uint32_t k = kCodebookSize;
    std::vector<float> centroids;
    std::uint64_t seed = 0;
    std::uint64_t source_count = 0;
    /// Set when some unit had fewer than k distinct values and its tail repeats the max.
    bool degenerate = false;

    std::uint32_t units() const noexcept { return scope == CodebookScope::global ? 1 : channels; }

    std::span<const float> block(std::uint32_t unit) const {
        return std::span<const float>(centroids).subspan(static_cast<std::size_t>(unit) * k, k);
    }

    std::span<const float> block_for_channel(std::uint32_t channel) const {
        return block(scope == CodebookScope::global ? 0 : channel);
    }

    void validate() const {
        if (k < 1 || k > kCodebookSize) fail(Errc::invalid_argument, "codebook size must be in 1..256");
        if (channels < 1) fail(Errc::invalid_argument, "codebook channel count must be positive");
        if (scope == CodebookScope::global && channels != 1) fail(Errc::invalid_argument, "global codebook must have channels = 1");
        if (centroids.size() != static_cast<std::size_t>(units()) * k)
            fail(Errc::invalid_argument, "centroid count does not match scope");
        for (std::uint32_t u = 0; u < units(); ++u) {
            auto b = block(u);
            for (std::size_t i = 0; i < b.size(); ++i) {
                if (!std::isfinite(b[i])) fail(Errc::non_finite_value, "codebook centroid");
                if (i > 0 && b[i] < b[i - 1]) fail(Errc::corrupt_payload, "codebook centroids not sorted");
            }
        }
    }

    /// Geometry and values only; fit provenance (seed, source_count) is not part of the dictionary.
    bool same_dictionary(const Codebook& o) const {
        return scope == o.scope && channels == o.channels && k == o.k && centroids == o.centroids;
    }
};

/// Uniform binning of [min, max] into 256 equal-width bins.
struct Int8Range {
    float min = -1.0f;
    float max = 1.0f;

    double bin_width() const noexcept { return (static_cast<double>(max) - static_cast<double>(min)) / 256.0; }

    void validate() const {
        if (!std::isfinite(min) || !std::isfinite(max)) fail(Errc::non_finite_value, "int8 range bounds");
        if (!(max > min) || !(bin_width() > 0.0))
            fail(Errc::degenerate_range, "int8 range [" + std::to_string(min) + ", " + std::to_string(max) + "] has no width");
    }

    bool operator==(const Int8Range&) const = default;
};

struct QuantizedLatent {
    LatentLayout layout;
    GridDims grid;
    QuantMode mode = QuantMode::kmeans_8bit;
    std::vector<std::uint8_t> indices;

    bool operator==(const QuantizedLatent&) const = default;
};

struct CodebookFitOptions {
    CodebookScope scope = CodebookScope::global;
    std::uint64_t seed = 0;
    std::size_t max_samples = std::size_t{1} << 20;
    std::uint32_t max_iters = 100;
    double rel_tol = 1e-6;
    std::uint32_t k = kCodebookSize;
};

struct CodebookFit {
    Codebook codebook;
    /// Per unit: SSE of the initial centroids, then after each accepted Lloyd step.
    std::vector<std::vector<double>> sse_history;

    double final_sse() const {
        double total = 0.0;
        for (const auto& h : sse_history) total += h.empty() ? 0.0 : h.back();
        return total;
    }
};

namespace detail {

/// mt19937_64 with portable bounded draws (std distributions differ across standard libraries).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do v = engine_(); while (v >= limit);
        return v % n;
    }

    /// Uniform real in [0, 1).
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

/// Seeded reservoir sample (algorithm R); keeps everything when the stream fits.
class Reservoir {
public:
    Reservoir(std::size_t capacity, SeededRng& rng) : capacity_(capacity), rng_(rng) { kept_.reserve(std::min<std::size_t>(capacity, 1 << 16)); }

    void offer(double v) {
        ++seen_;
        if (kept_.size() < capacity_) {
            kept_.push_back(v);
            return;
        }
        const auto j = rng_.below(seen_);
        if (j < capacity_) kept_[j] = v;
    }

    std::vector<double> take() { return std::move(kept_); }

private:
    std::size_t capacity_;
    SeededRng& rng_;
    std::vector<double> kept_;
    std::uint64_t seen_ = 0;
};

/// Nearest-centroid partition of sorted values: cluster j owns [starts[j], starts[j+1]).
struct Partition {
    std::vector<std::size_t> starts;
    double sse = 0.0;
};

/// Sweep assignment over sorted values using centroid midpoints; ties go to the lower index.
inline Partition assign_sorted(std::span<const double> values, std::span<const double> centroids) {
    const std::size_t k = centroids.size();
    Partition p;
    p.starts.assign(k + 1, values.size());
    std::size_t j = 0;
    p.starts[0] = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        while (j + 1 < k && values[i] > 0.5 * (centroids[j] + centroids[j + 1])) {
            ++j;
            p.starts[j] = i;
        }
        const double d = values[i] - centroids[j];
        p.sse += d * d;
    }
    for (std::size_t t = j + 1; t < k; ++t) p.starts[t] = values.size();
    return p;
}

inline std::vector<double> kmeans_plus_plus(std::span<const double> values, std::uint32_t k, SeededRng& rng) {
    const std::size_t n = values.size();
    std::vector<double> centroids;
    centroids.reserve(k);
    centroids.push_back(values[rng.below(n)]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = (values[i] - centroids[0]) * (values[i] - centroids[0]);

    while (centroids.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        if (!(total > 0.0)) break;
        const double target = rng.unit() * total;
        double acc = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (acc > target && d2[i] > 0.0) {
                pick = i;
                break;
            }
        }
        if (pick == n) {
            // Rounding left target at the very end of the mass; take the last uncovered point.
            for (std::size_t i = n; i-- > 0;)
                if (d2[i] > 0.0) { pick = i; break; }
        }
        const double c = values[pick];
        centroids.push_back(c);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], (values[i] - c) * (values[i] - c));
    }
    std::sort(centroids.begin(), centroids.end());
    return centroids;
}

/// Globally optimal contiguous k-partition of sorted values by dynamic programming, O(k u^2)
/// over the u distinct values. Returns the group means.
inline std::vector<double> optimal_partition_means(std::span<const double> sorted, std::uint32_t k) {
    std::vector<double> uniq;
    std::vector<double> weight;
    for (double v : sorted) {
        if (uniq.empty() || v != uniq.back()) {
            uniq.push_back(v);
            weight.push_back(1.0);
        } else {
            weight.back() += 1.0;
        }
    }
    const std::size_t u = uniq.size();
    const double shift = uniq[u / 2];
    std::vector<double> w(u + 1, 0.0), s1(u + 1, 0.0), s2(u + 1, 0.0);
    for (std::size_t i = 0; i < u; ++i) {
        const double x = uniq[i] - shift;
        w[i + 1] = w[i] + weight[i];
        s1[i + 1] = s1[i] + weight[i] * x;
        s2[i + 1] = s2[i] + weight[i] * x * x;
    }
    // Within-group SSE of distinct values [a, b).
    auto cost = [&](std::size_t a, std::size_t b) {
        const double ww = w[b] - w[a];
        const double m = s1[b] - s1[a];
        return std::max(0.0, (s2[b] - s2[a]) - m * m / ww);
    };

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(k, std::vector<double>(u + 1, inf));
    std::vector<std::vector<std::size_t>> split(k, std::vector<std::size_t>(u + 1, 0));
    for (std::size_t b = 1; b <= u; ++b) best[0][b] = cost(0, b);
    for (std::uint32_t m = 1; m < k; ++m) {
        for (std::size_t b = m + 1; b <= u; ++b) {
            for (std::size_t a = m; a < b; ++a) {
                const double c = best[m - 1][a] + cost(a, b);
                if (c < best[m][b]) {
                    best[m][b] = c;
                    split[m][b] = a;
                }
            }
        }
    }

    std::vector<double> means(k);
    std::size_t b = u;
    for (std::uint32_t m = k; m-- > 0;) {
        const std::size_t a = m == 0 ? 0 : split[m][b];
        means[m] = shift + (s1[b] - s1[a]) / (w[b] - w[a]);
        b = a;
    }
    return means;
}

/// Inputs at or below this k*u^2 budget are seeded from the exact optimum.
inline constexpr double kExactInitBudget = static_cast<double>(1 << 24);

struct UnitFit {
    std::vector<double> centroids;
    std::vector<double> sse_history;
    bool degenerate = false;
};

/// 1-D Lloyd iteration on sorted samples.
inline UnitFit fit_sorted_unit(std::span<const double> sorted, const CodebookFitOptions& opt, SeededRng& rng) {
    UnitFit out;
    const std::uint32_t k = opt.k;

    std::size_t distinct = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (i == 0 || sorted[i] != sorted[i - 1]) ++distinct;

    if (distinct <= k) {
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (i == 0 || sorted[i] != sorted[i - 1]) out.centroids.push_back(sorted[i]);
        out.degenerate = distinct < k;
        out.centroids.resize(k, out.centroids.back());
        out.sse_history.push_back(0.0);
        return out;
    }

    std::vector<double> centroids =
        static_cast<double>(k) * static_cast<double>(distinct) * static_cast<double>(distinct) <= kExactInitBudget
            ? optimal_partition_means(sorted, k)
            : kmeans_plus_plus(sorted, k, rng);
    // k-means++ stops early only if every point already sits on a centroid.
    while (centroids.size() < k) centroids.push_back(centroids.back());

    Partition part = assign_sorted(sorted, centroids);
    out.sse_history.push_back(part.sse);

    for (std::uint32_t iter = 0; iter < opt.max_iters; ++iter) {
        std::vector<double> next(k);
        std::vector<std::size_t> empty;
        for (std::uint32_t j = 0; j < k; ++j) {
            const std::size_t a = part.starts[j], b = part.starts[j + 1];
            if (a == b) {
                empty.push_back(j);
                next[j] = centroids[j];
                continue;
            }
            double sum = 0.0;
            for (std::size_t i = a; i < b; ++i) sum += sorted[i];
            next[j] = sum / static_cast<double>(b - a);
        }

        // Empty clusters take the value farthest from its own centroid; in 1-D that is a range endpoint.
        std::vector<bool> taken(empty.empty() ? 0 : sorted.size(), false);
        for (std::size_t e : empty) {
            double worst = 0.0;
            std::size_t pick = sorted.size();
            for (std::uint32_t j = 0; j < k; ++j) {
                const std::size_t a = part.starts[j], b = part.starts[j + 1];
                if (a == b) continue;
                for (std::size_t i : {a, b - 1}) {
                    const double d = std::abs(sorted[i] - next[j]);
                    if (!taken[i] && d > worst) {
                        worst = d;
                        pick = i;
                    }
                }
            }
            if (pick == sorted.size()) break;
            taken[pick] = true;
            next[e] = sorted[pick];
        }
        std::sort(next.begin(), next.end());

        Partition candidate = assign_sorted(sorted, next);
        if (candidate.sse > part.sse) break;
        const double improvement = part.sse - candidate.sse;
        centroids = std::move(next);
        part = std::move(candidate);
        out.sse_history.push_back(part.sse);
        if (part.sse == 0.0 || improvement < opt.rel_tol * (part.sse + improvement)) break;
    }
    out.centroids = std::move(centroids);
    return out;
}

/// Round to float, enforce ascending order, collapse duplicates and pad with the max.
inline std::vector<float> finalize_block(std::span<const double> centroids, std::uint32_t k, bool& degenerate) {
    std::vector<float> block;
    block.reserve(k);
    for (double c : centroids) block.push_back(static_cast<float>(c));
    std::sort(block.begin(), block.end());
    block.erase(std::unique(block.begin(), block.end()), block.end());
    if (block.size() < k) degenerate = true;
    block.resize(k, block.back());
    return block;
}

inline std::vector<double> midpoints(std::span<const float> centroids) {
    std::vector<double> mids(centroids.size() - 1);
    for (std::size_t i = 0; i + 1 < centroids.size(); ++i)
        mids[i] = 0.5 * (static_cast<double>(centroids[i]) + static_cast<double>(centroids[i + 1]));
    return mids;
}

}  // namespace detail

/// Nearest-centroid lookup for one sorted codebook block. Repeated centroids
/// resolve to the first index of their run, matching a lowest-index linear scan.
class CentroidSearch {
public:
    explicit CentroidSearch(std::span<const float> centroids) : mids_(detail::midpoints(centroids)), first_(centroids.size()) {
        for (std::size_t i = 0; i < centroids.size(); ++i)
            first_[i] = static_cast<std::uint8_t>(i > 0 && centroids[i] == centroids[i - 1] ? first_[i - 1] : i);
    }

    std::uint8_t operator()(double v) const { return first_[static_cast<std::size_t>(std::lower_bound(mids_.begin(), mids_.end(), v) - mids_.begin())]; }

private:
    std::vector<double> mids_;
    std::vector<std::uint8_t> first_;
};

namespace detail {

}  // namespace detail

/// Learns a scalar codebook over latent values with seeded sampling and 1-D Lloyd iteration.
inline CodebookFit fit_codebook(std::span<const LatentTensor> samples, const CodebookFitOptions& opt = {}) {
    if (samples.empty()) fail(Errc::empty_samples, "no latent samples supplied");
    if (opt.k < 1 || opt.k > kCodebookSize) fail(Errc::invalid_argument, "k must be in 1..256");
    if (opt.max_iters < 1) fail(Errc::invalid_argument, "max_iters must be at least 1");
    if (opt.max_samples < 1) fail(Errc::invalid_argument, "max_samples must be at least 1");

    const std::uint32_t channels = samples.front().channels();
    if (opt.scope == CodebookScope::per_channel)
        for (const auto& s : samples)
            if (s.channels() != channels) fail(Errc::layout_mismatch, "per-channel codebook needs a uniform channel count");
    for (const auto& s : samples) s.validate();

    CodebookFit fit;
    Codebook& cb = fit.codebook;
    cb.scope = opt.scope;
    cb.channels = opt.scope == CodebookScope::global ? 1 : channels;
    cb.k = opt.k;
    cb.seed = opt.seed;
    cb.centroids.reserve(static_cast<std::size_t>(cb.units()) * opt.k);

    for (std::uint32_t unit = 0; unit < cb.units(); ++unit) {
        detail::SeededRng rng(opt.seed, unit);
        detail::Reservoir reservoir(opt.max_samples, rng);
        for (const auto& s : samples) {
            if (opt.scope == CodebookScope::global) {
                for (float v : s.values) reservoir.offer(v);
            } else {
                for (float v : s.channel(unit)) reservoir.offer(v);
            }
        }
        std::vector<double> values = reservoir.take();
        if (values.empty()) fail(Errc::empty_samples, "scope unit " + std::to_string(unit) + " has no values");
        std::sort(values.begin(), values.end());
        cb.source_count += values.size();

        detail::UnitFit unit_fit = detail::fit_sorted_unit(values, opt, rng);
        bool degenerate = unit_fit.degenerate;
        auto block = detail::finalize_block(unit_fit.centroids, opt.k, degenerate);
        cb.degenerate = cb.degenerate || degenerate;
        cb.centroids.insert(cb.centroids.end(), block.begin(), block.end());
        fit.sse_history.push_back(std::move(unit_fit.sse_history));
    }
    return fit;
}

inline void check_codebook_compatible(const Codebook& cb, const LatentLayout& layout) {
    cb.validate();
    if (cb.scope == CodebookScope::per_channel && cb.channels != layout.channels)
        fail(Errc::layout_mismatch, "per-channel codebook has " + std::to_string(cb.channels) + " channels, latent has " +
                                        std::to_string(layout.channels));
}

/// Nearest-centroid index by midpoint boundary search; a value on a midpoint goes to the lower index.
inline QuantizedLatent quantize_kmeans(const LatentTensor& latent, const Codebook& cb) {
    check_codebook_compatible(cb, latent.layout);
    QuantizedLatent q{latent.layout, latent.grid(), QuantMode::kmeans_8bit, {}};
    q.indices.resize(latent.values.size());
    std::optional<CentroidSearch> nearest;
    for (std::uint32_t c = 0; c < latent.channels(); ++c) {
        if (c == 0 || cb.scope == CodebookScope::per_channel) nearest.emplace(cb.block_for_channel(c));
        auto plane = latent.channel(c);
        const std::size_t base = c * latent.plane_size();
        for (std::size_t i = 0; i < plane.size(); ++i) {
            if (!std::isfinite(plane[i])) fail(Errc::non_finite_value, "latent value at index " + std::to_string(base + i));
            q.indices[base + i] = (*nearest)(plane[i]);
        }
    }
    return q;
}

inline std::uint8_t int8_bin(const Int8Range& range, double v) {
    const double pos = std::floor((v - static_cast<double>(range.min)) / range.bin_width());
    return static_cast<std::uint8_t>(std::clamp(pos, 0.0, 255.0));
}

inline float int8_bin_center(const Int8Range& range, std::uint8_t idx) {
    return static_cast<float>(static_cast<double>(range.min) + (static_cast<double>(idx) + 0.5) * range.bin_width());
}

inline QuantizedLatent quantize_int8(const LatentTensor& latent, const Int8Range& range) {
    range.validate();
    QuantizedLatent q{latent.layout, latent.grid(), QuantMode::static_int8, {}};
    q.indices.resize(latent.values.size());
    for (std::size_t i = 0; i < latent.values.size(); ++i) {
        const float v = latent.values[i];
        if (!std::isfinite(v)) fail(Errc::non_finite_value, "latent value at index " + std::to_string(i));
        q.indices[i] = int8_bin(range, v);
    }
    return q;
}

inline LatentTensor dequantize(const QuantizedLatent& q, const Codebook& cb) {
    if (q.mode != QuantMode::kmeans_8bit) fail(Errc::mode_mismatch, "codebook supplied for a non-kmeans latent");
    check_codebook_compatible(cb, q.layout);
    LatentTensor t(q.layout, q.grid.height, q.grid.width);
    if (q.indices.size() != t.values.size()) fail(Errc::corrupt_payload, "index count does not match grid");
    const std::size_t plane = t.plane_size();
    for (std::uint32_t c = 0; c < t.channels(); ++c) {
        auto block = cb.block_for_channel(c);
        for (std::size_t i = 0; i < plane; ++i) {
            const std::size_t at = c * plane + i;
            t.values[at] = block[std::min<std::size_t>(q.indices[at], block.size() - 1)];
        }
    }
    return t;
}

inline LatentTensor dequantize(const QuantizedLatent& q, const Int8Range& range) {
    if (q.mode != QuantMode::static_int8) fail(Errc::mode_mismatch, "int8 range supplied for a non-int8 latent");
    range.validate();
    LatentTensor t(q.layout, q.grid.height, q.grid.width);
    if (q.indices.size() != t.values.size()) fail(Errc::corrupt_payload, "index count does not match grid");
    for (std::size_t i = 0; i < q.indices.size(); ++i) t.values[i] = int8_bin_center(range, q.indices[i]);
    return t;
}

/// Symmetric calibration range [-m, m], m = largest magnitude seen.
inline Int8Range calibrate_int8_range(std::span<const LatentTensor> samples) {
    if (samples.empty()) fail(Errc::empty_samples, "no latent samples supplied");
    float lo = std::numeric_limits<float>::infinity();
    float hi = -std::numeric_limits<float>::infinity();
    std::size_t count = 0;
    for (const auto& s : samples) {
        for (float v : s.values) {
            if (!std::isfinite(v)) fail(Errc::non_finite_value, "calibration sample");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            ++count;
        }
    }
    if (count == 0) fail(Errc::empty_samples, "calibration samples hold no values");
    const float m = std::max(std::abs(lo), std::abs(hi));
    Int8Range range{-m, m};
    if (!(m > 0.0f)) fail(Errc::degenerate_range, "all calibration values are zero");
    return range;
}

namespace kcb {

inline constexpr std::string_view kMagic = "KCB1";

/// KCB1: magic | u8 scope | u32 channels | u64 seed | units x 256 f32.
/// Codebooks with k < 256 are padded with their largest centroid.
inline Bytes write(const Codebook& cb) {
    cb.validate();
    ByteWriter w;
    w.magic(kMagic);
    w.u8(static_cast<std::uint8_t>(cb.scope));
    w.u32(cb.channels);
    w.u64(cb.seed);
    for (std::uint32_t u = 0; u < cb.units(); ++u) {
        auto b = cb.block(u);
        w.f32s(b);
        for (std::uint32_t i = cb.k; i < kCodebookSize; ++i) w.f32(b.back());
    }
    return w.take();
}

inline Codebook read(std::span<const std::uint8_t> bytes) {
    if (!ByteReader(bytes).has_magic(kMagic)) fail(Errc::bad_magic, "not a KCB1 stream");
    ByteReader r(bytes);
    r.skip(kMagic.size());
    Codebook cb;
    const auto scope = r.u8();
    if (scope > 1) fail(Errc::unsupported_mode, "codebook scope " + std::to_string(scope));
    cb.scope = static_cast<CodebookScope>(scope);
    cb.channels = r.u32();
    cb.seed = r.u64();
    if (cb.channels < 1 || cb.channels > LatentLayout::kMaxChannels) fail(Errc::corrupt_payload, "codebook channel count");
    if (cb.scope == CodebookScope::global && cb.channels != 1) fail(Errc::corrupt_payload, "global codebook with channels != 1");
    cb.k = kCodebookSize;
    const std::size_t expected = static_cast<std::size_t>(cb.units()) * kCodebookSize * 4;
    if (r.remaining() < expected) fail(Errc::truncated_payload, "codebook blocks incomplete");
    if (r.remaining() > expected) fail(Errc::trailing_data, "bytes after codebook blocks");
    cb.centroids.resize(static_cast<std::size_t>(cb.units()) * kCodebookSize);
    r.f32s(cb.centroids);
    cb.validate();
    for (std::uint32_t u = 0; u < cb.units(); ++u) {
        auto b = cb.block(u);
        for (std::size_t i = 1; i < b.size(); ++i)
            if (b[i] == b[i - 1]) cb.degenerate = true;
    }
    return cb;
}

}  // namespace kcb

namespace int8_range_file {

inline constexpr std::string_view kMagic = "I8R1";

/// I8R1: magic | f32 min | f32 max.
inline Bytes write(const Int8Range& range) {
    range.validate();
    ByteWriter w;
    w.magic(kMagic);
    w.f32(range.min);
    w.f32(range.max);
    return w.take();
}

inline Int8Range read(std::span<const std::uint8_t> bytes) {
    if (!ByteReader(bytes).has_magic(kMagic)) fail(Errc::bad_magic, "not an I8R1 stream");
    ByteReader r(bytes);
    r.skip(kMagic.size());
    Int8Range range;
    range.min = r.f32();
    range.max = r.f32();
    if (r.remaining() != 0) fail(Errc::trailing_data, "bytes after int8 range");
    range.validate();
    return range;
}

}  // namespace int8_range_file

}  // namespace latentcodec
