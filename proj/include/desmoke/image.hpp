#pragma once

#include <vector>

#include "desmoke/common.hpp"

namespace desmoke {

// Planar raster of normalized intensities in [0,1]: data[c][y][x] laid out
// channel-major, row-major within a channel. 1 (gray) or 3 (RGB) channels.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0);

    std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
    std::size_t size() const { return pixels() * channels; }

    double* plane(int c) { return data.data() + c * pixels(); }
    const double* plane(int c) const { return data.data() + c * pixels(); }

    double& at(int c, int y, int x) { return data[c * pixels() + static_cast<std::size_t>(y) * width + x]; }
    double at(int c, int y, int x) const {
        return data[c * pixels() + static_cast<std::size_t>(y) * width + x];
    }

    // Clamp all values into [0,1]; operations whose math can leave the
    // range call this before returning.
    void clamp01();

    // All values finite and in [0,1].
    bool valid() const;

    // Mean of all channels per pixel.
    std::vector<double> luminance() const;
};

// CIELAB raster: L in [0,100], a/b unbounded opponent channels.
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> L, a, b;

    LabImage() = default;
    LabImage(int w, int h)
        : width(w), height(h),
          L(static_cast<std::size_t>(w) * h),
          a(static_cast<std::size_t>(w) * h),
          b(static_cast<std::size_t>(w) * h) {}

    std::size_t pixels() const { return static_cast<std::size_t>(width) * height; }
};

inline void require_same_shape(const Image& x, const Image& y, const char* what) {
    require(x.width == y.width && x.height == y.height && x.channels == y.channels,
            ErrorKind::shape, std::string(what) + ": image shapes differ");
}

}  // namespace desmoke
