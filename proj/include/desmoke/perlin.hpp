#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace desmoke {

// Seeded 2-D gradient (Perlin) noise with quintic interpolation.
class PerlinNoise {
public:
    explicit PerlinNoise(std::uint64_t seed);

    // Single octave, roughly in [-sqrt(2)/2, sqrt(2)/2].
    double sample(double x, double y) const;

    // Octave sum with the given persistence, normalized into [-1, 1].
    double fractal(double x, double y, int octaves, double persistence) const;

private:
    std::array<std::uint8_t, 512> perm_;
};

// Fractal noise map rescaled into [0,1]; deterministic for a fixed seed.
std::vector<double> perlin_map(int width, int height, std::uint64_t seed, int octaves,
                               double base_frequency, double persistence);

}  // namespace desmoke
