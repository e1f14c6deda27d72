#include <gtest/gtest.h>

#include <filesystem>

#include "latentcodec/image_io.hpp"
#include "support/synthetic.hpp"

using namespace latentcodec;
namespace fs = std::filesystem;

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

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "latentcodec_image_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Ppm, Roundtrip) {
    const auto img = latentcodec::testing::synthetic_tissue(1, 17, 23);
    const Bytes b = image_io::encode_ppm(img);
    EXPECT_EQ(b.size(), std::string("P6\n23 17\n255\n").size() + 17 * 23 * 3);
    EXPECT_EQ(image_io::decode_ppm(b), img);
}

TEST(Ppm, CommentsInHeader) {
    const std::string text = "P6\n# made by hand\n2 1\n255\n";
    Bytes b(text.begin(), text.end());
    for (int i = 0; i < 6; ++i) b.push_back(static_cast<std::uint8_t>(i * 40));
    const auto img = image_io::decode_ppm(b);
    EXPECT_EQ(img.width, 2u);
    EXPECT_EQ(img.height, 1u);
    EXPECT_EQ(img.at(0, 1, 2), 200);
}

TEST(Ppm, Errors) {
    const std::string p3 = "P3\n1 1\n255\n0 0 0\n";
    EXPECT_EQ(code_of([&] { image_io::decode_ppm(Bytes(p3.begin(), p3.end())); }), Errc::bad_magic);
    const std::string wide = "P6\n1 1\n65535\n";
    EXPECT_EQ(code_of([&] { image_io::decode_ppm(Bytes(wide.begin(), wide.end())); }), Errc::unsupported_dtype);
    const std::string shortp = "P6\n2 2\n255\nabc";
    EXPECT_EQ(code_of([&] { image_io::decode_ppm(Bytes(shortp.begin(), shortp.end())); }), Errc::truncated_payload);
    EXPECT_EQ(code_of([] { image_io::encode_ppm(ImageBuffer{}); }), Errc::invalid_argument);
}

TEST(Png, Roundtrip) {
    const auto img = latentcodec::testing::synthetic_tissue(2, 40, 31);
    const Bytes b = image_io::encode_png(img);
    EXPECT_TRUE(image_io::is_png(b));
    EXPECT_EQ(image_io::decode_png(b), img);
    Bytes junk = b;
    junk.resize(20);
    EXPECT_NE(code_of([&] { image_io::decode_png(junk); }), Errc::invalid_argument);
}

TEST(ImageFiles, DispatchOnContent) {
    const auto img = latentcodec::testing::synthetic_tissue(3, 12, 12);
    const auto png = scratch("a.png"), ppm = scratch("b.ppm");
    image_io::write_image(png, img);
    image_io::write_image(ppm, img);
    EXPECT_TRUE(image_io::is_png(read_file(png)));
    EXPECT_FALSE(image_io::is_png(read_file(ppm)));
    EXPECT_EQ(image_io::read_image(png), img);
    EXPECT_EQ(image_io::read_image(ppm), img);
    EXPECT_TRUE(image_io::is_image_path("X.PNG"));
    EXPECT_FALSE(image_io::is_image_path("x.jpg"));
    EXPECT_EQ(code_of([] { image_io::read_image(scratch("missing.png")); }), Errc::io_error);
}
