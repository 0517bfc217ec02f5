#include "desmoke/veil.hpp"

#include <algorithm>

#include "desmoke/dcp.hpp"
#include "desmoke/guided_filter.hpp"

namespace desmoke {

Image remove_veil(const Image& img, double strength, int structuring_radius) {
    require(img.channels == 3, ErrorKind::shape, "remove_veil needs a 3-channel image");
    require(strength >= 0.0 && strength <= 1.0, ErrorKind::argument,
            "strength must be in [0,1]");

    std::vector<double> chan_min(img.pixels());
    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    for (std::size_t i = 0; i < chan_min.size(); ++i) {
        chan_min[i] = std::min(r[i], std::min(g[i], b[i]));
    }

    // Morphological opening keeps the smooth veil and drops bright detail.
    const int window = 2 * structuring_radius + 1;
    std::vector<double> opened =
        max_filter(min_filter(chan_min, img.width, img.height, window), img.width, img.height,
                   window);

    std::vector<double> dark = dark_channel(img, window);
    std::array<double, 3> airlight = estimate_airlight(img, dark, 0.001);
    const double a_min = std::min(airlight[0], std::min(airlight[1], airlight[2]));

    Image out(img.width, img.height, img.channels);
    for (std::size_t i = 0; i < img.pixels(); ++i) {
        double veil = strength * opened[i];
        veil = std::min(veil, 0.999 * chan_min[i]);  // keep V below the channel min
        veil = std::min(veil, 0.95 * a_min);         // keep 1 - V/A away from zero
        veil = std::max(veil, 0.0);
        for (int c = 0; c < 3; ++c) {
            const double denom = 1.0 - veil / airlight[static_cast<std::size_t>(c)];
            out.plane(c)[i] = (img.plane(c)[i] - veil) / denom;
        }
    }
    out.clamp01();
    return out;
}

}  // namespace desmoke
