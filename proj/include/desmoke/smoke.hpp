#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "desmoke/image.hpp"

namespace desmoke {

// Per-pixel medium transmission: 1 = clear view, 0 = fully obscured.
struct TransmissionMap {
    int width = 0;
    int height = 0;
    std::vector<double> t;

    TransmissionMap() = default;
    TransmissionMap(int w, int h, double fill = 1.0)
        : width(w), height(h), t(static_cast<std::size_t>(w) * h, fill) {}
};

enum class Density { light, medium, heavy };

const char* density_name(Density d);
Density density_from_name(const std::string& name);

// Transmission floor per density; the range extends up to 1.
double density_floor(Density d);

struct SmokeParams {
    Density density = Density::medium;
    std::array<double, 3> airlight = {0.9, 0.9, 0.9};  // drawn in [0.7, 1.0]
    int perlin_octaves = 4;
    double base_frequency = 4.0;
    double persistence = 0.5;
    std::uint64_t seed = 0;
};

// Fractal noise in [0,1] at the given size, deterministic per seed.
TransmissionMap perlin_noise(int width, int height, const SmokeParams& params);

// Affine map of [0,1] noise into the density's transmission range, so
// heavier smoke gets a lower floor.
TransmissionMap noise_to_transmission(const TransmissionMap& noise, Density density);

// I = J*t + A*(1-t), per channel, clamped to [0,1].
Image composite_smoke(const Image& clean, const TransmissionMap& t,
                      const std::array<double, 3>& airlight);

// J = (I - A*(1-t)) / t, clamped to [0,1]. Requires t >= 0.05 everywhere.
Image invert_scattering(const Image& smoky, const TransmissionMap& t,
                        const std::array<double, 3>& airlight);

}  // namespace desmoke
