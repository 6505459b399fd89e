#include <doctest.h>

#include <fstream>

#include "gkdcv/error.hpp"
#include "gkdcv/image.hpp"
#include "helpers.hpp"

using gkdcv::Error;
using gkdcv::GrayImage;
using testutil::TempDir;

namespace {

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("ascii pgm with all 255 loads as all ones") {
    TempDir tmp;
    const std::string path = tmp.file("white.pgm");
    write_text(path, "P2\n2 2\n255\n255 255\n255 255\n");
    const GrayImage img = gkdcv::load_image(path);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    for (double p : img.pixels) CHECK(p == 1.0);
}

TEST_CASE("pgm header comments are skipped") {
    TempDir tmp;
    const std::string path = tmp.file("c.pgm");
    write_text(path, "P2\n# a comment\n1 # trailing\n1\n255\n128\n");
    const GrayImage img = gkdcv::load_image(path);
    CHECK(img.pixels[0] == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("white rgb png maps to 1.0 via luma weights") {
    TempDir tmp;
    const std::string path = tmp.file("white.png");
    testutil::write_png_rgb8(path, 1, 1, {255, 255, 255});
    const GrayImage img = gkdcv::load_image(path);
    CHECK(img.pixels[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(img.pixels[0] <= 1.0);
}

TEST_CASE("pure red png maps to the red luma weight") {
    TempDir tmp;
    const std::string path = tmp.file("red.png");
    testutil::write_png_rgb8(path, 1, 1, {255, 0, 0});
    const GrayImage img = gkdcv::load_image(path);
    CHECK(img.pixels[0] == doctest::Approx(0.299).epsilon(1e-12));
}

TEST_CASE("gray png loads 1:1") {
    TempDir tmp;
    const std::string path = tmp.file("gray.png");
    testutil::write_png_gray8(path, 2, 1, {0, 128});
    const GrayImage img = gkdcv::load_image(path);
    CHECK(img.width == 2);
    CHECK(img.pixels[0] == 0.0);
    CHECK(img.pixels[1] == doctest::Approx(128.0 / 255.0));
}

TEST_CASE("16-bit png is rejected naming the path") {
    TempDir tmp;
    const std::string path = tmp.file("deep.png");
    testutil::write_png_gray16(path, 1, 1, {65535});
    try {
        gkdcv::load_image(path);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.category() == "format");
        CHECK(std::string(e.what()).find(path) != std::string::npos);
        CHECK(std::string(e.what()).find("bit depth") != std::string::npos);
    }
}

TEST_CASE("pgm with non-255 maxval is rejected") {
    TempDir tmp;
    const std::string path = tmp.file("deep.pgm");
    write_text(path, "P2\n1 1\n65535\n1024\n");
    try {
        gkdcv::load_image(path);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("bit depth") != std::string::npos);
    }
}

TEST_CASE("missing and malformed files fail with io/format categories") {
    TempDir tmp;
    CHECK_THROWS_AS(gkdcv::load_image(tmp.file("absent.pgm")), Error);
    const std::string garbage = tmp.file("garbage.pgm");
    write_text(garbage, "not an image at all");
    CHECK_THROWS_AS(gkdcv::load_image(garbage), Error);
    const std::string truncated = tmp.file("short.pgm");
    write_text(truncated, "P5\n4 4\n255\nab");
    CHECK_THROWS_AS(gkdcv::load_image(truncated), Error);
}

TEST_CASE("binary pgm round trip is exact on quantized values") {
    TempDir tmp;
    GrayImage img = testutil::random_image(9, 7, 101);
    for (double& p : img.pixels) p = std::round(p * 255.0) / 255.0;  // representable levels
    const std::string path = tmp.file("rt.pgm");
    gkdcv::save_pgm(img, path, true);
    const GrayImage back = gkdcv::load_image(path);
    REQUIRE(back.pixels.size() == img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        CHECK(back.pixels[i] == doctest::Approx(img.pixels[i]).epsilon(1e-12));
    }
}

TEST_CASE("resize to the same size is bit-identical") {
    const GrayImage img = testutil::random_image(12, 17, 7);
    const GrayImage out = gkdcv::resize(img, 12, 17);
    CHECK(out.pixels == img.pixels);
}

TEST_CASE("resize preserves constant images") {
    const GrayImage img = GrayImage::filled(5, 9, 0.375);
    const GrayImage out = gkdcv::resize(img, 13, 4);
    for (double p : out.pixels) CHECK(p == doctest::Approx(0.375).epsilon(1e-14));
}

TEST_CASE("1x2 gradient resized to 1x3 interpolates the midpoint") {
    GrayImage img;
    img.height = 1;
    img.width = 2;
    img.pixels = {0.0, 1.0};
    const GrayImage out = gkdcv::resize(img, 1, 3);
    REQUIRE(out.pixels.size() == 3);
    CHECK(out.pixels[0] == doctest::Approx(0.0));
    CHECK(out.pixels[1] == doctest::Approx(0.5));
    CHECK(out.pixels[2] == doctest::Approx(1.0));
}

TEST_CASE("load then resize to original dimensions is the identity") {
    TempDir tmp;
    GrayImage img = testutil::random_image(23, 31, 55);
    for (double& p : img.pixels) p = std::round(p * 255.0) / 255.0;
    const std::string path = tmp.file("id.pgm");
    gkdcv::save_pgm(img, path, true);
    const GrayImage loaded = gkdcv::load_image(path);
    const GrayImage resized = gkdcv::resize(loaded, 23, 31);
    CHECK(resized.pixels == loaded.pixels);
}

TEST_CASE("loaded pixels always stay inside [0,1]") {
    TempDir tmp;
    const std::string path = tmp.file("rand.png");
    std::vector<std::uint8_t> rgb;
    std::mt19937 rng(3);
    for (int i = 0; i < 16 * 16 * 3; ++i) rgb.push_back(static_cast<std::uint8_t>(rng() & 0xff));
    testutil::write_png_rgb8(path, 16, 16, rgb);
    const GrayImage img = gkdcv::load_image(path);
    for (double p : img.pixels) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(std::isfinite(p));
    }
}

TEST_CASE("resize rejects degenerate targets") {
    const GrayImage img = GrayImage::filled(4, 4, 0.5);
    CHECK_THROWS_AS(gkdcv::resize(img, 0, 4), Error);
}
