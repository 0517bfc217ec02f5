#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "desmoke/color.hpp"
#include "desmoke/image_io.hpp"
#include "desmoke/resize.hpp"
#include "support/scenes.hpp"

using namespace desmoke;
namespace fs = std::filesystem;

namespace {

std::string temp_dir() {
    auto dir = fs::temp_directory_path() / "desmoke_imgio_tests";
    fs::create_directories(dir);
    return dir.string();
}

void write_ppm_bytes(const std::string& path, const std::string& bytes) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
}

}  // namespace

TEST_SUITE("imgio") {

TEST_CASE("ppm with all bytes 255 loads as ones") {
    const std::string path = temp_dir() + "/white.ppm";
    write_ppm_bytes(path, std::string("P6\n2 2\n255\n") + std::string(12, '\xff'));
    Image img = load_image(path);
    CHECK(img.width == 2);
    CHECK(img.height == 2);
    CHECK(img.channels == 3);
    for (double v : img.data) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("byte 128 normalizes to 128/255") {
    const std::string path = temp_dir() + "/gray.ppm";
    write_ppm_bytes(path, std::string("P6\n1 1\n255\n") + std::string(3, '\x80'));
    Image img = load_image(path);
    CHECK(img.at(0, 0, 0) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("quantization endpoints") {
    Image img(2, 1, 1);
    img.at(0, 0, 0) = 1.0;
    img.at(0, 0, 1) = 0.5;
    const std::string path = temp_dir() + "/quant.png";
    save_image(img, path);
    Image back = load_image(path);
    CHECK(back.at(0, 0, 0) == doctest::Approx(1.0));
    // round(127.5) rounds up to 128
    CHECK(back.at(0, 0, 1) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("random round-trips stay within quantization error") {
    for (int c : {1, 3}) {
        Image img = testsupport::random_image(17, 13, c, 99 + static_cast<unsigned>(c));
        const std::string png = temp_dir() + "/rt" + std::to_string(c) + ".png";
        save_image(img, png);
        Image back = load_image(png);
        REQUIRE(back.channels == c);
        double worst = 0.0;
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            worst = std::max(worst, std::fabs(img.data[i] - back.data[i]));
        }
        CHECK(worst <= 1.0 / 510.0 + 1e-12);

        // save(load(save(x))) is stable: already-quantized values survive exactly
        const std::string png2 = temp_dir() + "/rt2.png";
        save_image(back, png2);
        Image back2 = load_image(png2);
        for (std::size_t i = 0; i < back.data.size(); ++i) CHECK(back2.data[i] == back.data[i]);
    }
}

TEST_CASE("ppm round-trip matches png round-trip") {
    Image img = testsupport::random_image(9, 7, 3, 1234);
    const std::string ppm = temp_dir() + "/rt.ppm";
    save_image(img, ppm);
    Image back = load_image(ppm);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        CHECK(std::fabs(img.data[i] - back.data[i]) <= 1.0 / 510.0 + 1e-12);
    }
}

TEST_CASE("16-bit ppm is accepted") {
    // one pixel, value 0x8000 per channel
    std::string payload;
    for (int i = 0; i < 3; ++i) {
        payload.push_back('\x80');
        payload.push_back('\x00');
    }
    const std::string path = temp_dir() + "/deep.ppm";
    write_ppm_bytes(path, "P6\n1 1\n65535\n" + payload);
    Image img = load_image(path);
    CHECK(img.at(0, 0, 0) == doctest::Approx(32768.0 / 65535.0).epsilon(1e-12));
}

TEST_CASE("unsupported formats and bad paths raise the right categories") {
    CHECK_THROWS_AS(load_image(temp_dir() + "/nope.png"), Error);
    const std::string bogus = temp_dir() + "/bogus.bin";
    write_ppm_bytes(bogus, "not an image at all");
    try {
        load_image(bogus);
        FAIL("expected a format error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::format);
    }
    try {
        load_image(temp_dir() + "/missing.png");
        FAIL("expected an io error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::io);
    }
}

TEST_CASE("rgb_to_lab anchors") {
    Image img(3, 1, 3);
    // white, black, red
    img.at(0, 0, 0) = 1;  img.at(1, 0, 0) = 1;  img.at(2, 0, 0) = 1;
    img.at(0, 0, 1) = 0;  img.at(1, 0, 1) = 0;  img.at(2, 0, 1) = 0;
    img.at(0, 0, 2) = 1;  img.at(1, 0, 2) = 0;  img.at(2, 0, 2) = 0;
    LabImage lab = rgb_to_lab(img);

    CHECK(lab.L[0] == doctest::Approx(100.0).epsilon(1e-6));
    CHECK(std::fabs(lab.a[0]) < 0.01);
    CHECK(std::fabs(lab.b[0]) < 0.01);

    CHECK(lab.L[1] == doctest::Approx(0.0));
    CHECK(lab.a[1] == doctest::Approx(0.0));
    CHECK(lab.b[1] == doctest::Approx(0.0));

    // reference values from an independent CIE calculator
    CHECK(std::fabs(lab.L[2] - 53.2408) < 0.01);
    CHECK(std::fabs(lab.a[2] - 80.0925) < 0.01);
    CHECK(std::fabs(lab.b[2] - 67.2032) < 0.01);
}

TEST_CASE("gray pixels stay neutral in Lab") {
    for (double v : {0.13, 0.5, 0.77, 0.999}) {
        Image img(1, 1, 3);
        img.at(0, 0, 0) = img.at(1, 0, 0) = img.at(2, 0, 0) = v;
        LabImage lab = rgb_to_lab(img);
        CHECK(std::fabs(lab.a[0]) < 0.01);
        CHECK(std::fabs(lab.b[0]) < 0.01);
    }
}

TEST_CASE("rgb_to_lab rejects single-channel input") {
    Image gray(4, 4, 1);
    CHECK_THROWS_AS(rgb_to_lab(gray), Error);
}

TEST_CASE("resize_and_pad geometry") {
    Image img = testsupport::random_image(256, 256, 3, 5);
    Image same = resize_and_pad(img, 256, 256);
    CHECK(same.width == 256);
    CHECK(same.height == 256);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(same.data[i] == img.data[i]);

    Image wide = testsupport::random_image(512, 256, 3, 6);
    Image fitted = resize_and_pad(wide, 256, 256);
    CHECK(fitted.width == 256);
    CHECK(fitted.height == 256);
    FitRect r = fit_rect(512, 256, 256, 256);
    CHECK(r.width == 256);
    CHECK(r.height == 128);
    CHECK(r.y == 64);
    // 64 zero rows top and bottom
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 256; ++x) {
                CHECK(fitted.at(c, y, x) == 0.0);
                CHECK(fitted.at(c, 255 - y, x) == 0.0);
            }
        }
    }
}

TEST_CASE("constant image resizes to the same constant") {
    Image img(37, 23, 3, 0.42);
    Image out = resize_bilinear(img, 64, 64);
    for (double v : out.data) CHECK(v == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("bilinear matches a direct evaluation") {
    Image img = testsupport::random_image(11, 7, 1, 77);
    Image out = resize_bilinear(img, 23, 17);
    // spot-check against the sampling formula
    Rng rng(3);
    for (int k = 0; k < 40; ++k) {
        const int x = static_cast<int>(rng.below(23));
        const int y = static_cast<int>(rng.below(17));
        const double sx = (x + 0.5) * 11.0 / 23.0 - 0.5;
        const double sy = (y + 0.5) * 7.0 / 17.0 - 0.5;
        const int x0 = static_cast<int>(std::floor(sx));
        const int y0 = static_cast<int>(std::floor(sy));
        auto at = [&](int yy, int xx) {
            return img.at(0, std::clamp(yy, 0, 6), std::clamp(xx, 0, 10));
        };
        const double fx = sx - x0;
        const double fy = sy - y0;
        const double expect = (at(y0, x0) * (1 - fx) + at(y0, x0 + 1) * fx) * (1 - fy) +
                              (at(y0 + 1, x0) * (1 - fx) + at(y0 + 1, x0 + 1) * fx) * fy;
        CHECK(out.at(0, y, x) == doctest::Approx(std::clamp(expect, 0.0, 1.0)).epsilon(1e-12));
    }
}

}  // TEST_SUITE
