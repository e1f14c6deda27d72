// Acceptance gate: one PASS/FAIL line per criterion, each timed against its budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "latentcodec/latentcodec.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace latentcodec;
using namespace latentcodec::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double budget_s;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Shared by the end-to-end and monotonicity criteria.
const std::vector<ImageBuffer>& training_corpus() {
    static const auto corpus = synthetic_corpus(7, 8, 256, 256);
    return corpus;
}

const std::vector<ImageBuffer>& held_out() {
    static const auto images = synthetic_corpus(8, 20, 256, 256);
    return images;
}

Outcome size_arithmetic() {
    struct Row {
        LatentLayout layout;
        std::uint64_t raw, quant;
    };
    const Row rows[] = {{presets::sd15_like(), 16384, 4096}, {presets::sd3_like(), 65536, 16384}, {presets::dcae_like(), 8192, 2048}};
    const auto corpus = synthetic_corpus(3, 2, 256, 256);
    const auto tile = synthetic_tissue(4);
    bool ok = true;
    std::uint64_t worst_overhead = 0;
    std::ostringstream detail;
    for (const auto& row : rows) {
        const auto model = fit_linear_codec(corpus, row.layout, 1, 4096);
        std::vector<LatentTensor> latents;
        for (const auto& img : corpus) latents.push_back(encode(model, img));
        const Dictionary dicts[] = {std::monostate{}, calibrate_int8_range(latents), fit_codebook(latents).codebook};
        detail << row.layout.model_id << " ";
        for (QuantMode mode : {QuantMode::raw_f32, QuantMode::static_int8, QuantMode::kmeans_8bit}) {
            const std::uint64_t want = mode == QuantMode::raw_f32 ? row.raw : row.quant;
            const auto c = compress_image(tile, model, mode, dicts[static_cast<int>(mode)]);
            const Bytes file = plc::write(c);
            ok &= c.payload_bytes() == want && latent_byte_size(row.layout, {256 / row.layout.factor, 256 / row.layout.factor}, mode) == want;
            const std::uint64_t overhead = file.size() - c.payload_bytes();
            worst_overhead = std::max(worst_overhead, overhead);
            ok &= overhead < 1200;
            detail << c.payload_bytes() << (mode == QuantMode::kmeans_8bit ? "; " : "/");
        }
    }
    detail << "max overhead " << worst_overhead << " B";
    return {ok, detail.str()};
}

Outcome kmeans_oracle() {
    std::mt19937_64 rng(99);
    int fixtures = 0, matched = 0;
    double worst = 0.0;
    for (; fixtures < 60; ++fixtures) {
        const int n = std::uniform_int_distribution<int>(1, 12)(rng);
        const auto k = static_cast<std::uint32_t>(std::uniform_int_distribution<int>(1, 3)(rng));
        std::vector<float> vals(n);
        for (auto& v : vals) v = static_cast<float>(std::uniform_int_distribution<int>(0, 3)(rng) * 4.0 + std::normal_distribution<double>(0, 1.0)(rng));
        if (fixtures % 10 == 0 && n > 2) vals[1] = vals[0];
        LatentTensor t(LatentLayout{8, 1, "oracle"}, 1, static_cast<std::uint32_t>(n));
        t.values = vals;
        CodebookFitOptions o;
        o.k = k;
        o.seed = static_cast<std::uint64_t>(fixtures);
        const auto fit = fit_codebook(std::span<const LatentTensor>(&t, 1), o);

        // SSE of the stored codebook under nearest assignment, independent of the fitter's bookkeeping.
        double sse = 0.0;
        for (float v : vals) {
            const float c = fit.codebook.centroids[linear_scan_nearest(fit.codebook.centroids, v)];
            sse += (static_cast<double>(v) - c) * (static_cast<double>(v) - c);
        }
        const double optimum = exhaustive_kmeans_sse(std::vector<double>(vals.begin(), vals.end()), k);
        const double rel = optimum > 0 ? std::abs(sse - optimum) / optimum : std::abs(sse);
        worst = std::max(worst, rel);
        matched += rel <= 1e-9;
    }
    return {matched == fixtures, fmt("%d/%d fixtures at optimum, worst rel err %.2e", matched, fixtures, worst)};
}

Outcome assignment_oracle() {
    std::mt19937_64 rng(4242);
    std::normal_distribution<float> nd(0.0f, 1.0f);
    std::vector<float> cents(256);
    for (auto& c : cents) c = nd(rng);
    std::sort(cents.begin(), cents.end());
    Codebook cb;
    cb.centroids = cents;

    LatentTensor t(LatentLayout{8, 1, "oracle"}, 1, 100000);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        switch (i % 3) {
        case 0: t.values[i] = nd(rng) * 1.5f; break;
        case 1: t.values[i] = static_cast<float>(0.5 * (static_cast<double>(cents[i % 255]) + cents[i % 255 + 1])); break;
        default: t.values[i] = cents[i % 256]; break;
        }
    }
    const auto q = quantize_kmeans(t, cb);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < t.values.size(); ++i) mismatches += q.indices[i] != linear_scan_nearest(cents, t.values[i]);
    return {mismatches == 0, fmt("%zu mismatches over %zu values", mismatches, t.values.size())};
}

Outcome skew_advantage() {
    bool ok = true;
    std::ostringstream detail;
    for (double b : {0.1, 0.3, 1.0}) {
        LatentTensor t(LatentLayout{8, 1, "laplace"}, 1, 100000);
        t.values = laplace_samples(100000, b, 11);
        const std::span<const LatentTensor> one(&t, 1);
        CodebookFitOptions o;
        o.seed = 3;
        const auto cb = fit_codebook(one, o).codebook;
        const auto range = calibrate_int8_range(one);
        const auto km = dequantize(quantize_kmeans(t, cb), cb);
        const auto i8 = dequantize(quantize_int8(t, range), range);
        double mse_km = 0.0, mse_i8 = 0.0;
        for (std::size_t i = 0; i < t.values.size(); ++i) {
            mse_km += std::pow(static_cast<double>(t.values[i]) - km.values[i], 2);
            mse_i8 += std::pow(static_cast<double>(t.values[i]) - i8.values[i], 2);
        }
        ok &= mse_km < mse_i8;
        detail << fmt("b=%.1f int8/kmeans MSE ratio %.2f; ", b, mse_i8 / mse_km);
    }
    auto s = detail.str();
    return {ok, s.substr(0, s.size() - 2)};
}

Outcome end_to_end() {
    const auto model = fit_linear_codec(training_corpus(), presets::sd15_like(), 1, 1 << 16);
    std::vector<LatentTensor> latents;
    for (const auto& img : training_corpus()) latents.push_back(encode(model, img));
    CodebookFitOptions o;
    o.seed = 1;
    const auto cb = fit_codebook(latents, o).codebook;
    const auto range = calibrate_int8_range(latents);
    const auto full = fit_linear_codec(training_corpus(), LatentLayout{8, 192, "full-rank"}, 1, 1 << 16);

    int wins = 0, identical = 0;
    double sum_km = 0.0, sum_i8 = 0.0;
    for (const auto& img : held_out()) {
        const double pk = psnr(img, decompress_image(plc::read(plc::write(compress_image(img, model, QuantMode::kmeans_8bit, cb))), model));
        const double pi = psnr(img, decompress_image(plc::read(plc::write(compress_image(img, model, QuantMode::static_int8, range))), model));
        wins += pk >= pi;
        sum_km += pk;
        sum_i8 += pi;
        identical += decompress_image(plc::read(plc::write(compress_image(img, full, QuantMode::raw_f32, {}))), full) == img;
    }
    const int n = static_cast<int>(held_out().size());
    return {wins >= 18 && identical == n, fmt("kmeans >= int8 on %d/%d (mean %.2f vs %.2f dB); raw full-rank bit-identical %d/%d", wins, n,
                                              sum_km / n, sum_i8 / n, identical, n)};
}

Outcome rd_monotone() {
    bool ok = true;
    double prev = -1.0;
    std::ostringstream detail;
    for (std::uint32_t c : {2u, 4u, 8u, 16u}) {
        const auto model = fit_linear_codec(training_corpus(), LatentLayout{8, c, "rd"}, 1, 1 << 16);
        double sum = 0.0;
        for (const auto& img : held_out()) sum += psnr(img, decode(model, encode(model, img), img.height, img.width));
        const double mean = sum / static_cast<double>(held_out().size());
        ok &= mean >= prev;
        prev = mean;
        detail << fmt("c=%u %.2f dB; ", c, mean);
    }
    auto s = detail.str();
    return {ok, s.substr(0, s.size() - 2)};
}

std::string random_id(std::mt19937_64& rng) {
    const int len = std::uniform_int_distribution<int>(0, 16)(rng);
    std::string s;
    for (int i = 0; i < len; ++i) s += static_cast<char>(std::uniform_int_distribution<int>('!', '~')(rng));
    return s;
}

std::vector<float> sorted_block(std::mt19937_64& rng, std::size_t n) {
    std::vector<float> v(n);
    std::normal_distribution<float> nd(0.0f, 2.0f);
    for (auto& x : v) x = nd(rng);
    std::sort(v.begin(), v.end());
    return v;
}

CompressedContainer random_container(std::mt19937_64& rng) {
    auto pick = [&](int lo, int hi) { return static_cast<std::uint32_t>(std::uniform_int_distribution<int>(lo, hi)(rng)); };
    CompressedContainer c;
    const std::uint32_t f = 1u << pick(0, 3);
    c.layout = LatentLayout{f, pick(1, 8), random_id(rng)};
    c.mode = static_cast<QuantMode>(pick(0, 2));
    c.tile_size = f * pick(1, 8);
    c.image_height = pick(1, 3 * c.tile_size);
    c.image_width = pick(1, 3 * c.tile_size);
    c.rows = (c.image_height + c.tile_size - 1) / c.tile_size;
    c.cols = (c.image_width + c.tile_size - 1) / c.tile_size;
    if (c.mode == QuantMode::static_int8) {
        const float lo = std::uniform_real_distribution<float>(-5.0f, 0.0f)(rng);
        c.dictionary = Int8Range{lo, lo + std::uniform_real_distribution<float>(0.1f, 5.0f)(rng)};
    } else if (c.mode == QuantMode::kmeans_8bit) {
        Codebook cb;
        cb.scope = pick(0, 1) ? CodebookScope::per_channel : CodebookScope::global;
        cb.channels = cb.scope == CodebookScope::per_channel ? c.layout.channels : 1;
        cb.seed = rng();
        for (std::uint32_t u = 0; u < cb.units(); ++u) {
            const auto block = sorted_block(rng, kCodebookSize);
            cb.centroids.insert(cb.centroids.end(), block.begin(), block.end());
        }
        c.dictionary = cb;
    }
    for (std::uint32_t i = 0; i < c.rows * c.cols; ++i) {
        ByteWriter w;
        const auto n = c.tile_payload_bytes();
        if (c.mode == QuantMode::raw_f32) {
            std::normal_distribution<float> nd;
            for (std::uint64_t j = 0; j < n / 4; ++j) w.f32(nd(rng));
        } else {
            for (std::uint64_t j = 0; j < n; ++j) w.u8(static_cast<std::uint8_t>(rng()));
        }
        c.tiles.push_back(w.take());
    }
    return c;
}

Outcome format_roundtrips() {
    std::mt19937_64 rng(5150);
    auto pick = [&](int lo, int hi) { return static_cast<std::uint32_t>(std::uniform_int_distribution<int>(lo, hi)(rng)); };
    int lif_ok = 0, kcb_ok = 0, pca_ok = 0, plc_ok = 0;
    const int n = 100;
    for (int i = 0; i < n; ++i) {
        LatentTensor t(LatentLayout{1u << pick(0, 5), pick(1, 40), random_id(rng)}, pick(1, 24), pick(1, 24));
        std::normal_distribution<float> nd(0.0f, 3.0f);
        for (auto& v : t.values) v = nd(rng);
        const Bytes lb = lif::write(t);
        lif_ok += lif::write(lif::read(lb)) == lb && lif::read(lb) == t;

        Codebook cb;
        cb.scope = pick(0, 1) ? CodebookScope::per_channel : CodebookScope::global;
        cb.channels = cb.scope == CodebookScope::per_channel ? pick(1, 16) : 1;
        cb.seed = rng();
        for (std::uint32_t u = 0; u < cb.units(); ++u) {
            const auto block = sorted_block(rng, kCodebookSize);
            cb.centroids.insert(cb.centroids.end(), block.begin(), block.end());
        }
        const Bytes kb = kcb::write(cb);
        kcb_ok += kcb::write(kcb::read(kb)) == kb && kcb::read(kb).centroids == cb.centroids;

        LinearCodecModel m;
        const std::uint32_t f = 1u << pick(0, 3);
        m.layout = LatentLayout{f, pick(1, std::min(3 * f * f, 24u)), random_id(rng)};
        m.patch_dim = 3 * f * f;
        m.mean.resize(m.patch_dim);
        m.components.resize(static_cast<std::size_t>(m.layout.channels) * m.patch_dim);
        for (auto& v : m.mean) v = nd(rng);
        for (auto& v : m.components) v = nd(rng);
        const Bytes pb = pca::write(m);
        pca_ok += pca::write(pca::read(pb)) == pb && pca::read(pb).components == m.components;

        const auto c = random_container(rng);
        const Bytes cbytes = plc::write(c);
        plc_ok += plc::write(plc::read(cbytes)) == cbytes && plc::read(cbytes).tiles == c.tiles;
    }

    // Every single-byte substitution in a container must be rejected on read.
    std::size_t tried = 0, rejected = 0, by_crc = 0;
    for (int i = 0; i < 8; ++i) {
        const Bytes good = plc::write(random_container(rng));
        for (std::size_t pos = 0; pos < good.size(); ++pos) {
            Bytes bad = good;
            bad[pos] ^= static_cast<std::uint8_t>(1u << (pos % 8));
            ++tried;
            try {
                plc::read(bad);
            } catch (const CodecError& e) {
                ++rejected;
                by_crc += e.code() == Errc::checksum_mismatch;
            }
        }
    }
    const bool ok = lif_ok == n && kcb_ok == n && pca_ok == n && plc_ok == n && rejected == tried;
    return {ok, fmt("LIF %d/%d KCB1 %d/%d PCA1 %d/%d PLC1 %d/%d; corruptions rejected %zu/%zu (%zu by CRC, rest by header checks)", lif_ok, n,
                    kcb_ok, n, pca_ok, n, plc_ok, n, rejected, tried, by_crc)};
}

Outcome metric_fixtures() {
    bool ok = true;
    std::ostringstream detail;
    const double p = psnr(ImageBuffer(64, 64, 100), ImageBuffer(64, 64, 101));
    ok &= std::abs(p - 48.1308) <= 0.001;
    detail << fmt("+1 PSNR %.4f dB; ", p);

    const auto img = synthetic_tissue(12, 96, 96);
    const double s = ssim(img, img);
    ok &= std::abs(s - 1.0) <= 1e-9;
    detail << fmt("SSIM(x,x) %.12f; ", s);

    double worst = 0.0;
    const double c1 = (0.01 * 255) * (0.01 * 255);
    for (auto [a, b] : {std::pair{10, 200}, std::pair{128, 129}, std::pair{0, 255}, std::pair{77, 77}}) {
        const double expected = (2.0 * a * b + c1) / (static_cast<double>(a) * a + static_cast<double>(b) * b + c1);
        worst = std::max(worst, std::abs(ssim(ImageBuffer(32, 32, static_cast<std::uint8_t>(a)), ImageBuffer(32, 32, static_cast<std::uint8_t>(b))) - expected));
    }
    ok &= worst <= 1e-6;
    detail << fmt("constant SSIM err %.1e; ", worst);

    const EmbeddingVector v{{0.5f, -1.25f, 3.0f, 0.0f}, "fixture"};
    EmbeddingVector neg = v;
    for (auto& x : neg.values) x = -x;
    const EmbeddingVector e1{{1.0f, 0.0f}, "fixture"}, e2{{0.0f, 1.0f}, "fixture"};
    const bool embed_ok = embed_cosine(v, v) == 1.0 && embed_cosine(v, neg) == -1.0 && embed_cosine(e1, e2) == 0.0 && embed_l1(v, v) == 0.0 &&
                          embed_l1(e1, e2) == 2.0;
    ok &= embed_ok;
    detail << "embedding identities " << (embed_ok ? "exact" : "NOT exact");
    return {ok, detail.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"size-arithmetic", 1.0, size_arithmetic},
        {"kmeans-oracle", 10.0, kmeans_oracle},
        {"assignment-oracle", 5.0, assignment_oracle},
        {"skew-advantage", 30.0, skew_advantage},
        {"end-to-end", 120.0, end_to_end},
        {"rd-monotone", 120.0, rd_monotone},
        {"format-roundtrips", 10.0, format_roundtrips},
        {"metric-fixtures", 10.0, metric_fixtures},
    };
    // Build the shared corpora up front so their cost is not charged to the first criterion that uses them.
    training_corpus();
    held_out();

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool pass = out.pass && secs < c.budget_s;
        failed += !pass;
        std::printf("%s %-18s %6.2fs (limit %gs)  %s\n", pass ? "PASS" : "FAIL", c.name.c_str(), secs, c.budget_s, out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
