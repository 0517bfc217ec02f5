#include "desmoke/dcp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "desmoke/guided_filter.hpp"

namespace desmoke {

std::vector<double> dark_channel(const Image& img, int patch) {
    require(img.channels == 3, ErrorKind::shape, "dark_channel needs a 3-channel image");
    std::vector<double> chan_min(img.pixels());
    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    for (std::size_t i = 0; i < chan_min.size(); ++i) {
        chan_min[i] = std::min(r[i], std::min(g[i], b[i]));
    }
    return min_filter(chan_min, img.width, img.height, patch);
}

std::array<double, 3> estimate_airlight(const Image& img, const std::vector<double>& dark,
                                        double fraction) {
    require(dark.size() == img.pixels(), ErrorKind::shape,
            "estimate_airlight: dark channel size mismatch");
    const std::size_t n = dark.size();
    std::size_t k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    k = std::clamp<std::size_t>(k, 1, n);

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(),
                     [&](std::size_t a, std::size_t b) {
                         if (dark[a] != dark[b]) return dark[a] > dark[b];
                         return a < b;
                     });

    const double* r = img.plane(0);
    const double* g = img.plane(1);
    const double* b = img.plane(2);
    std::size_t best = idx[0];
    double best_sum = r[best] + g[best] + b[best];
    for (std::size_t j = 1; j < k; ++j) {
        const std::size_t i = idx[j];
        const double s = r[i] + g[i] + b[i];
        if (s > best_sum || (s == best_sum && i < best)) {
            best = i;
            best_sum = s;
        }
    }
    return {r[best], g[best], b[best]};
}

TransmissionMap estimate_transmission_raw(const Image& img, const std::array<double, 3>& airlight,
                                          const DcpParams& params) {
    for (double a : airlight) {
        require(a > 0.0, ErrorKind::numeric, "estimate_transmission: zero airlight channel");
    }
    Image normed(img.width, img.height, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        const double* src = img.plane(c);
        double* dst = normed.plane(c);
        const double inv = 1.0 / airlight[static_cast<std::size_t>(c)];
        for (std::size_t i = 0; i < img.pixels(); ++i) dst[i] = src[i] * inv;
    }
    std::vector<double> dark = dark_channel(normed, params.patch_size);

    TransmissionMap t(img.width, img.height);
    for (std::size_t i = 0; i < dark.size(); ++i) {
        t.t[i] = std::clamp(1.0 - params.omega * dark[i], params.t_floor, 1.0);
    }
    return t;
}

TransmissionMap estimate_transmission(const Image& img, const std::array<double, 3>& airlight,
                                      const DcpParams& params) {
    TransmissionMap t = estimate_transmission_raw(img, airlight, params);
    std::vector<double> guide = img.luminance();
    t.t = guided_filter(guide, t.t, img.width, img.height, params.guided_radius,
                        params.guided_eps);
    for (double& v : t.t) v = std::clamp(v, params.t_floor, 1.0);
    return t;
}

Image dehaze_dcp(const Image& img, const DcpParams& params) {
    require(img.channels == 3, ErrorKind::shape, "dehaze_dcp needs a 3-channel image");
    std::vector<double> dark = dark_channel(img, params.patch_size);
    std::array<double, 3> airlight = estimate_airlight(img, dark, params.airlight_fraction);
    TransmissionMap t = estimate_transmission(img, airlight, params);

    Image out(img.width, img.height, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        const double* in = img.plane(c);
        const double a = airlight[static_cast<std::size_t>(c)];
        double* dst = out.plane(c);
        for (std::size_t i = 0; i < img.pixels(); ++i) {
            const double tv = std::max(t.t[i], params.t_floor);
            // (I - A)/t + A, exact identity when t == 1
            dst[i] = in[i] + (in[i] - a) * (1.0 / tv - 1.0);
        }
    }
    out.clamp01();
    return out;
}

}  // namespace desmoke
