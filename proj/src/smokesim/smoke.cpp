#include "desmoke/smoke.hpp"

#include <algorithm>

#include "desmoke/kernels.hpp"
#include "desmoke/perlin.hpp"

namespace desmoke {

const char* density_name(Density d) {
    switch (d) {
        case Density::light: return "light";
        case Density::medium: return "medium";
        default: return "heavy";
    }
}

Density density_from_name(const std::string& name) {
    if (name == "light") return Density::light;
    if (name == "medium") return Density::medium;
    if (name == "heavy") return Density::heavy;
    fail(ErrorKind::argument, "unknown density: " + name);
}

double density_floor(Density d) {
    switch (d) {
        case Density::light: return 0.75;
        case Density::medium: return 0.5;
        default: return 0.25;
    }
}

TransmissionMap perlin_noise(int width, int height, const SmokeParams& params) {
    TransmissionMap m(width, height);
    m.t = perlin_map(width, height, params.seed, params.perlin_octaves, params.base_frequency,
                     params.persistence);
    return m;
}

TransmissionMap noise_to_transmission(const TransmissionMap& noise, Density density) {
    const double lo = density_floor(density);
    TransmissionMap out(noise.width, noise.height);
    for (std::size_t i = 0; i < noise.t.size(); ++i) {
        out.t[i] = lo + (1.0 - lo) * noise.t[i];
    }
    return out;
}

Image composite_smoke(const Image& clean, const TransmissionMap& t,
                      const std::array<double, 3>& airlight) {
    require(clean.width == t.width && clean.height == t.height, ErrorKind::shape,
            "composite_smoke: transmission map shape differs from image");
    Image out(clean.width, clean.height, clean.channels);
    for (int c = 0; c < clean.channels; ++c) {
        kernels::lerp_airlight(clean.pixels(), clean.plane(c), t.t.data(),
                               airlight[static_cast<std::size_t>(c)], out.plane(c));
    }
    out.clamp01();
    return out;
}

Image invert_scattering(const Image& smoky, const TransmissionMap& t,
                        const std::array<double, 3>& airlight) {
    require(smoky.width == t.width && smoky.height == t.height, ErrorKind::shape,
            "invert_scattering: transmission map shape differs from image");
    constexpr double kFloor = 0.05;
    for (double v : t.t) {
        require(v >= kFloor, ErrorKind::numeric,
                "invert_scattering: transmission below floor 0.05");
    }
    Image out(smoky.width, smoky.height, smoky.channels);
    for (int c = 0; c < smoky.channels; ++c) {
        const double* in = smoky.plane(c);
        const double a = airlight[static_cast<std::size_t>(c)];
        double* dst = out.plane(c);
        for (std::size_t i = 0; i < smoky.pixels(); ++i) {
            // (I - A)/t + A, written so t == 1 reproduces I bit-exactly.
            dst[i] = in[i] + (in[i] - a) * (1.0 / t.t[i] - 1.0);
        }
    }
    out.clamp01();
    return out;
}

}  // namespace desmoke
