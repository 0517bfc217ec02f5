#include "desmoke/image.hpp"

#include <algorithm>
#include <cmath>

namespace desmoke {

Image::Image(int w, int h, int c, double fill)
    : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, fill) {
    require(w > 0 && h > 0 && (c == 1 || c == 3), ErrorKind::argument, "bad image dimensions");
}

void Image::clamp01() {
    for (double& v : data) v = std::clamp(v, 0.0, 1.0);
}

bool Image::valid() const {
    if (data.size() != size()) return false;
    for (double v : data) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
    }
    return true;
}

std::vector<double> Image::luminance() const {
    std::vector<double> lum(pixels(), 0.0);
    for (int c = 0; c < channels; ++c) {
        const double* p = plane(c);
        for (std::size_t i = 0; i < lum.size(); ++i) lum[i] += p[i];
    }
    const double inv = 1.0 / channels;
    for (double& v : lum) v *= inv;
    return lum;
}

}  // namespace desmoke
