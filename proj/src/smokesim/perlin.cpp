#include "desmoke/perlin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "desmoke/common.hpp"

namespace desmoke {

namespace {

inline double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// Eight unit-length gradient directions.
inline void gradient(std::uint8_t hash, double& gx, double& gy) {
    constexpr double d = 0.70710678118654752440;
    switch (hash & 7) {
        case 0: gx = 1.0; gy = 0.0; break;
        case 1: gx = -1.0; gy = 0.0; break;
        case 2: gx = 0.0; gy = 1.0; break;
        case 3: gx = 0.0; gy = -1.0; break;
        case 4: gx = d; gy = d; break;
        case 5: gx = -d; gy = d; break;
        case 6: gx = d; gy = -d; break;
        default: gx = -d; gy = -d; break;
    }
}

}  // namespace

PerlinNoise::PerlinNoise(std::uint64_t seed) {
    std::vector<std::uint8_t> p(256);
    std::iota(p.begin(), p.end(), 0);
    Rng rng(seed);
    rng.shuffle(p);
    for (int i = 0; i < 512; ++i) perm_[i] = p[i & 255];
}

double PerlinNoise::sample(double x, double y) const {
    const int xi = static_cast<int>(std::floor(x));
    const int yi = static_cast<int>(std::floor(y));
    const double xf = x - xi;
    const double yf = y - yi;
    const int X = xi & 255;
    const int Y = yi & 255;

    const double u = fade(xf);
    const double v = fade(yf);

    double g00x, g00y, g10x, g10y, g01x, g01y, g11x, g11y;
    gradient(perm_[perm_[X] + Y], g00x, g00y);
    gradient(perm_[perm_[X + 1] + Y], g10x, g10y);
    gradient(perm_[perm_[X] + Y + 1], g01x, g01y);
    gradient(perm_[perm_[X + 1] + Y + 1], g11x, g11y);

    const double n00 = g00x * xf + g00y * yf;
    const double n10 = g10x * (xf - 1.0) + g10y * yf;
    const double n01 = g01x * xf + g01y * (yf - 1.0);
    const double n11 = g11x * (xf - 1.0) + g11y * (yf - 1.0);

    const double nx0 = n00 + u * (n10 - n00);
    const double nx1 = n01 + u * (n11 - n01);
    return nx0 + v * (nx1 - nx0);
}

double PerlinNoise::fractal(double x, double y, int octaves, double persistence) const {
    double total = 0.0;
    double amplitude = 1.0;
    double frequency = 1.0;
    double norm = 0.0;
    for (int o = 0; o < octaves; ++o) {
        // Fixed per-octave lattice offset so octaves don't share zeros.
        const double off = 31.416 * o;
        total += amplitude * sample(x * frequency + off, y * frequency + off);
        norm += amplitude;
        amplitude *= persistence;
        frequency *= 2.0;
    }
    // Single-octave range is within +-sqrt(2)/2.
    return total / (norm * 0.70710678118654752440);
}

std::vector<double> perlin_map(int width, int height, std::uint64_t seed, int octaves,
                               double base_frequency, double persistence) {
    require(width > 0 && height > 0, ErrorKind::argument, "noise dims must be positive");
    require(octaves >= 1, ErrorKind::argument, "octaves must be >= 1");
    PerlinNoise noise(seed);
    std::vector<double> out(static_cast<std::size_t>(width) * height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double u = (x + 0.5) / width * base_frequency;
            double v = (y + 0.5) / height * base_frequency;
            out[static_cast<std::size_t>(y) * width + x] =
                noise.fractal(u, v, octaves, persistence);
        }
    }
    // rescale the observed range to exactly [0,1]
    double lo = out[0], hi = out[0];
    for (double v : out) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) {
        std::fill(out.begin(), out.end(), 0.5);
    } else {
        const double scale = 1.0 / (hi - lo);
        for (double& v : out) v = (v - lo) * scale;
    }
    return out;
}

}  // namespace desmoke
