#pragma once

// Procedural stand-ins for clean laparoscopic frames: smooth colored
// fields with opaque shapes and sprinkled near-zero channel values, so
// the dark-channel prior roughly holds on them.

#include <string>

#include "desmoke/image.hpp"

namespace desmoke::testsupport {

struct SceneOptions {
    bool zero_dark_channel = false;  // force an exact zero per 8x8 block
    int ellipses = 5;
};

Image make_scene(int w, int h, std::uint64_t seed, const SceneOptions& opts = {});

// Writes `count` scenes as PNGs into dir (created if needed).
void write_scene_dir(const std::string& dir, int count, int w, int h, std::uint64_t seed,
                     const SceneOptions& opts = {});

// Random image with values uniform in [0,1] (metric fuzzing).
Image random_image(int w, int h, int channels, std::uint64_t seed);

}  // namespace desmoke::testsupport
