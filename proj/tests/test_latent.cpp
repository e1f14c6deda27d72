#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "latentcodec/latent.hpp"
#include "latentcodec/lif.hpp"

using namespace latentcodec;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const CodecError& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected CodecError";
    return Errc::invalid_argument;
}

LatentTensor random_tensor(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> dim(1, 9);
    LatentLayout layout{dim(rng), dim(rng), "rand"};
    LatentTensor t(layout, dim(rng), dim(rng));
    std::normal_distribution<float> val(0.0f, 2.0f);
    for (auto& v : t.values) v = val(rng);
    return t;
}

}  // namespace

TEST(LatentLayout, PresetsMatchAutoencoderGeometry) {
    EXPECT_EQ(presets::sd15_like().factor, 8u);
    EXPECT_EQ(presets::sd15_like().channels, 4u);
    EXPECT_EQ(presets::sd3_like().channels, 16u);
    EXPECT_EQ(presets::dcae_like().factor, 32u);
    EXPECT_EQ(presets::dcae_like().channels, 32u);
    EXPECT_EQ(layout_preset("sd3-like")->channels, 16u);
    EXPECT_FALSE(layout_preset("vq-f4"));
}

TEST(LatentLayout, ValidateRanges) {
    EXPECT_EQ(code_of([] { LatentLayout{0, 4, ""}.validate(); }), Errc::invalid_argument);
    EXPECT_EQ(code_of([] { LatentLayout{257, 4, ""}.validate(); }), Errc::invalid_argument);
    EXPECT_EQ(code_of([] { LatentLayout{8, 1025, ""}.validate(); }), Errc::invalid_argument);
    EXPECT_EQ(code_of([] { LatentLayout{8, 4, "seventeen-bytes!!"}.validate(); }), Errc::invalid_argument);
    EXPECT_NO_THROW((LatentLayout{256, 1024, "sixteen-bytes-id"}.validate()));
}

TEST(LatentByteSize, TableSizes) {
    EXPECT_EQ(latent_byte_size(presets::sd15_like(), {32, 32}, QuantMode::raw_f32), 16384u);
    EXPECT_EQ(latent_byte_size(presets::sd15_like(), {32, 32}, QuantMode::kmeans_8bit), 4096u);
    EXPECT_EQ(latent_byte_size(presets::sd3_like(), {32, 32}, QuantMode::raw_f32), 65536u);
    EXPECT_EQ(latent_byte_size(presets::sd3_like(), {32, 32}, QuantMode::kmeans_8bit), 16384u);
    EXPECT_EQ(latent_byte_size(presets::dcae_like(), {8, 8}, QuantMode::raw_f32), 8192u);
    EXPECT_EQ(latent_byte_size(presets::dcae_like(), {8, 8}, QuantMode::kmeans_8bit), 2048u);
    EXPECT_EQ(latent_byte_size(presets::dcae_like(), {8, 8}, QuantMode::static_int8), 2048u);
}

TEST(LatentByteSize, QuantizedIsQuarterOfRaw) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::uint32_t> d(1, 4096);
    for (int i = 0; i < 200; ++i) {
        LatentLayout l{8, std::uniform_int_distribution<std::uint32_t>(1, 1024)(rng), ""};
        GridDims g{d(rng), d(rng)};
        EXPECT_EQ(latent_byte_size(l, g, QuantMode::kmeans_8bit) * 4, latent_byte_size(l, g, QuantMode::raw_f32));
    }
}

TEST(LatentByteSize, Errors) {
    EXPECT_EQ(code_of([] { latent_byte_size(presets::sd15_like(), {0, 32}, QuantMode::raw_f32); }), Errc::invalid_argument);
    const auto big = std::numeric_limits<std::uint32_t>::max();
    // 1024 * 2^32 * 2^32 * 4 overflows 64 bits.
    EXPECT_EQ(code_of([&] { latent_byte_size(LatentLayout{8, 1024, ""}, {big, big}, QuantMode::raw_f32); }), Errc::size_overflow);
}

TEST(LatentGrid, CeilingDivision) {
    EXPECT_EQ(latent_grid_for_image(presets::sd15_like(), 256, 256), (GridDims{32, 32}));
    EXPECT_EQ(latent_grid_for_image(presets::dcae_like(), 256, 256), (GridDims{8, 8}));
    EXPECT_EQ(latent_grid_for_image(presets::sd15_like(), 260, 256), (GridDims{33, 32}));
    EXPECT_EQ(latent_grid_for_image(presets::dcae_like(), 1, 1), (GridDims{1, 1}));
}

TEST(LatentGrid, MonotoneInImageDims) {
    for (std::uint32_t f : {1u, 3u, 8u, 32u}) {
        LatentLayout l{f, 4, ""};
        GridDims prev{0, 0};
        for (std::uint32_t h = 1; h < 300; ++h) {
            const auto g = latent_grid_for_image(l, h, h + 7);
            EXPECT_GE(g.height, prev.height);
            EXPECT_GE(g.width, prev.width);
            prev = g;
        }
    }
}

TEST(Lif, ZeroTensorRoundtrip) {
    LatentTensor t(LatentLayout{8, 4, "sd15-like"}, 2, 2);
    const Bytes bytes = lif::write(t);
    EXPECT_EQ(bytes.size(), lif::kHeaderBytes + 16 * 4);
    EXPECT_EQ(lif::read(bytes), t);
}

TEST(Lif, HeaderLayoutIsFixed) {
    LatentTensor t(LatentLayout{32, 3, "ab"}, 1, 2);
    t.values = {1.0f, -2.0f, 0.5f, 0.0f, -0.0f, 3.25f};
    const Bytes b = lif::write(t);
    ASSERT_EQ(b.size(), 40u + 24u);
    EXPECT_EQ(std::string(b.begin(), b.begin() + 4), "LIF1");
    EXPECT_EQ(b[4], 1);  // version
    EXPECT_EQ(b[5], 0);  // dtype
    EXPECT_EQ(b[6] | b[7], 0);
    EXPECT_EQ(b[8], 3);   // channels
    EXPECT_EQ(b[12], 1);  // height
    EXPECT_EQ(b[16], 2);  // width
    EXPECT_EQ(b[20], 32); // factor
    EXPECT_EQ(b[24], 'a');
    EXPECT_EQ(b[25], 'b');
    EXPECT_EQ(b[26], 0);
    // 1.0f little-endian
    EXPECT_EQ(b[40], 0x00);
    EXPECT_EQ(b[43], 0x3f);
}

TEST(Lif, RandomRoundtripIsBitExact) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const auto t = random_tensor(rng);
        const Bytes once = lif::write(t);
        const auto back = lif::read(once);
        EXPECT_EQ(back, t);
        EXPECT_EQ(lif::write(back), once);
    }
}

TEST(Lif, Errors) {
    LatentTensor t(LatentLayout{8, 4, "x"}, 2, 2);
    Bytes good = lif::write(t);

    Bytes bad = good;
    bad[0] = 'X';
    EXPECT_EQ(code_of([&] { lif::read(bad); }), Errc::bad_magic);

    bad = good;
    bad[4] = 2;
    EXPECT_EQ(code_of([&] { lif::read(bad); }), Errc::unsupported_version);

    bad = good;
    bad[5] = 1;
    EXPECT_EQ(code_of([&] { lif::read(bad); }), Errc::unsupported_dtype);

    Bytes header_only(good.begin(), good.begin() + lif::kHeaderBytes);
    EXPECT_EQ(code_of([&] { lif::read(header_only); }), Errc::truncated_payload);

    Bytes longer = good;
    longer.push_back(0);
    EXPECT_EQ(code_of([&] { lif::read(longer); }), Errc::trailing_data);

    t.values[3] = std::numeric_limits<float>::quiet_NaN();
    EXPECT_EQ(code_of([&] { lif::write(t); }), Errc::non_finite_value);
    t.values[3] = std::numeric_limits<float>::infinity();
    EXPECT_EQ(code_of([&] { lif::write(t); }), Errc::non_finite_value);

    // NaN smuggled into the payload is rejected on read too.
    bad = good;
    bad[lif::kHeaderBytes + 2] = 0xc0;
    bad[lif::kHeaderBytes + 3] = 0x7f;
    EXPECT_EQ(code_of([&] { lif::read(bad); }), Errc::non_finite_value);
}
