#include <doctest.h>

#include <cmath>

#include "desmoke/spectrum.hpp"
#include "support/scenes.hpp"

using namespace desmoke;
using testsupport::make_scene;
using testsupport::random_image;

namespace {

Image add_horizontal_cosine(const Image& base, double amplitude, int period) {
    Image out = base;
    for (int c = 0; c < out.channels; ++c) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                out.at(c, y, x) += amplitude * std::cos(2.0 * kPi * x / period);
            }
        }
    }
    out.clamp01();
    return out;
}

Image add_grid(const Image& base, double amplitude, int period) {
    Image out = base;
    for (int c = 0; c < out.channels; ++c) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                out.at(c, y, x) += amplitude * (std::cos(2.0 * kPi * x / period) +
                                                std::cos(2.0 * kPi * y / period));
            }
        }
    }
    out.clamp01();
    return out;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("constant image has an all-zero spectrum") {
    Image img(32, 32, 3, 0.6);
    Spectrum s = fft_magnitude(img);
    // zero up to the rounding residue of the mean subtraction
    for (double v : s.magnitude) CHECK(v < 1e-9);
    CHECK(grid_artifact_score(img) == 0.0);
}

TEST_CASE("pure horizontal cosine concentrates at +-16 on 64x64") {
    Image img(64, 64, 1, 0.5);
    Image tone = add_horizontal_cosine(img, 0.25, 4);
    Spectrum s = fft_magnitude(tone);
    const int cx = 32, cy = 32;
    double peak = 0.0;
    for (double v : s.magnitude) peak = std::max(peak, v);
    CHECK(s.at(cy, cx + 16) == doctest::Approx(peak));
    CHECK(s.at(cy, cx - 16) == doctest::Approx(peak));
    // everything else is numerically tiny
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            if ((y == cy && (x == cx + 16 || x == cx - 16))) continue;
            CHECK(s.at(y, x) < 1e-6 * peak);
        }
    }
}

TEST_CASE("Parseval relation holds") {
    for (int k = 0; k < 5; ++k) {
        Image img = random_image(48, 36, 3, 100 + k);
        Spectrum s = fft_magnitude(img);

        auto lum = img.luminance();
        double mean = 0.0;
        for (double v : lum) mean += v;
        mean /= lum.size();
        double pixel_energy = 0.0;
        for (double v : lum) pixel_energy += (v - mean) * (v - mean);

        double spec_energy = 0.0;
        for (double v : s.magnitude) spec_energy += v * v;
        spec_energy /= static_cast<double>(img.width) * img.height;

        CHECK(std::fabs(spec_energy - pixel_energy) <= 1e-6 * std::max(1.0, pixel_energy));
    }
}

TEST_CASE("injected cosine is reported as exactly one symmetric pair") {
    Image img = make_scene(64, 64, 5);
    Image tone = add_horizontal_cosine(img, 0.3, 4);
    Spectrum s = fft_magnitude(tone);
    auto peaks = detect_periodic_peaks(s, 50.0);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0].u == -peaks[1].u);
    CHECK(peaks[0].v == -peaks[1].v);
    CHECK(std::abs(peaks[0].u) == 16);
    CHECK(peaks[0].v == 0);
}

TEST_CASE("clean scenes yield no peaks at prominence 50") {
    for (int k = 0; k < 10; ++k) {
        Image img = make_scene(96, 96, 400 + k);
        auto peaks = detect_periodic_peaks(fft_magnitude(img), 50.0);
        CHECK(peaks.empty());
    }
}

TEST_CASE("period-2 checkerboard hits the Nyquist corner") {
    Image img = make_scene(64, 64, 6);
    Image board = img;
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < 64; ++y) {
            for (int x = 0; x < 64; ++x) {
                board.at(c, y, x) += ((x + y) % 2 == 0 ? 0.1 : -0.1);
            }
        }
    }
    board.clamp01();
    auto peaks = detect_periodic_peaks(fft_magnitude(board), 20.0);
    REQUIRE(!peaks.empty());
    // strongest peak sits at the self-symmetric Nyquist corner
    CHECK(std::abs(peaks[0].u) == 32);
    CHECK(std::abs(peaks[0].v) == 32);
}

TEST_CASE("grid score grows with the artifact and with amplitude") {
    int monotone = 0;
    for (int k = 0; k < 20; ++k) {
        Image img = make_scene(64, 64, 800 + k);
        const double s0 = grid_artifact_score(img);
        const double s1 = grid_artifact_score(add_grid(img, 0.05, 4));
        CHECK(s1 > s0);
        const double s_small = grid_artifact_score(add_grid(img, 0.02, 4));
        const double s_big = grid_artifact_score(add_grid(img, 0.1, 4));
        if (s_small <= s1 && s1 <= s_big && s_small > s0) ++monotone;
    }
    CHECK(monotone == 20);
}

TEST_CASE("grid score is invariant to halving the intensity") {
    Image img = add_grid(make_scene(64, 64, 901), 0.05, 4);
    Image halfed = img;
    for (double& v : halfed.data) v *= 0.5;
    CHECK(grid_artifact_score(img) == doctest::Approx(grid_artifact_score(halfed)).epsilon(1e-12));
    Image tiny(16, 16, 1, 0.5);
    CHECK_THROWS_AS(grid_artifact_score(tiny), Error);
}

TEST_CASE("all-pass notch filter is the identity") {
    Image img = make_scene(48, 48, 77);
    Image out = notch_filter(img, NotchMask::all_pass(48, 48));
    double worst = 0.0;
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        worst = std::max(worst, std::fabs(out.data[i] - img.data[i]));
    }
    CHECK(worst < 1e-6);

    NotchMask wrong = NotchMask::all_pass(32, 32);
    CHECK_THROWS_AS(notch_filter(img, wrong), Error);
}

TEST_CASE("notching the tone bins removes the tone") {
    // flat base, so the tone is the only content at its frequency
    Image img(64, 64, 1, 0.5);
    Image tone = add_horizontal_cosine(img, 0.2, 4);
    Spectrum s = fft_magnitude(tone);
    auto peaks = detect_periodic_peaks(s, 50.0);
    REQUIRE(peaks.size() == 2);
    NotchMask mask = make_notch_mask(64, 64, peaks, 1.5);
    Image filtered = notch_filter(tone, mask);

    auto amplitude_at = [](const Image& x, int period) {
        double acc = 0.0;
        for (int y = 0; y < x.height; ++y) {
            double dot = 0.0;
            for (int xx = 0; xx < x.width; ++xx) {
                dot += x.at(0, y, xx) * std::cos(2.0 * kPi * xx / period);
            }
            acc += 2.0 * dot / x.width;
        }
        return std::fabs(acc / x.height);
    };
    const double before = amplitude_at(tone, 4);
    const double after = amplitude_at(filtered, 4);
    CHECK(before == doctest::Approx(0.2).epsilon(0.01));
    CHECK(after < 0.01 * before);

    // on a textured scene the notched bins themselves go to zero
    Image scene_tone = add_horizontal_cosine(make_scene(64, 64, 88), 0.2, 4);
    Spectrum s2 = fft_magnitude(scene_tone);
    auto peaks2 = detect_periodic_peaks(s2, 50.0);
    REQUIRE(!peaks2.empty());
    Image filtered2 = notch_filter(scene_tone, make_notch_mask(64, 64, peaks2, 1.5));
    Spectrum s3 = fft_magnitude(filtered2);
    for (const auto& p : peaks2) {
        CHECK(s3.at(32 + p.v, 32 + p.u) < 0.01 * s2.at(32 + p.v, 32 + p.u));
    }
}

TEST_CASE("masks stay point-symmetric and protect the DC disk") {
    NotchMask m = NotchMask::all_pass(64, 64);
    m.notch(16, 7, 2.5);
    m.notch(-3, 20, 1.5);
    const int cx = 32, cy = 32;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const int mx = (2 * cx - x % 64 + 64) % 64;
            const int my = (2 * cy - y % 64 + 64) % 64;
            CHECK(m.pass[static_cast<std::size_t>(y) * 64 + x] ==
                  m.pass[static_cast<std::size_t>(my) * 64 + mx]);
        }
    }
    CHECK(m.pass[static_cast<std::size_t>(cy) * 64 + cx] == 1);
    const double rp = protect_radius(64, 64);
    for (int dy = -4; dy <= 4; ++dy) {
        for (int dx = -4; dx <= 4; ++dx) {
            if (dx * dx + dy * dy <= rp * rp) {
                CHECK(m.pass[static_cast<std::size_t>(cy + dy) * 64 + cx + dx] == 1);
            }
        }
    }
}

TEST_CASE("notching reduces the grid score of a contaminated image") {
    Image img = make_scene(64, 64, 99);
    Image bad = add_grid(img, 0.08, 4);
    const double before = grid_artifact_score(bad);
    Spectrum s = fft_magnitude(bad);
    auto peaks = detect_periodic_peaks(s, 10.0);
    REQUIRE(!peaks.empty());
    Image fixed = notch_filter(bad, make_notch_mask(64, 64, peaks, 1.5));
    CHECK(grid_artifact_score(fixed) < before);
}

}  // TEST_SUITE
