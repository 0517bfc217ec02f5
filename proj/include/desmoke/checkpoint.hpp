#pragma once

#include <string>
#include <utility>

#include "desmoke/network.hpp"

namespace desmoke {

// Versioned binary container: a JSON header (network spec, image size,
// step counter, buffer directory) followed by every weight and running
// statistic as little-endian 32-bit floats.
struct Checkpoint {
    NetworkSpec spec;
    int image_size = 64;
    long step = 0;
    std::vector<std::pair<std::string, std::vector<double>>> buffers;
};

Checkpoint snapshot(Generator& gen, Discriminator* disc, int image_size, long step);

// Copies buffers into the models by name; every model buffer must be
// present. `disc` may be null when only the generator is needed.
void restore(const Checkpoint& ck, Generator& gen, Discriminator* disc);

void save_checkpoint(const Checkpoint& ck, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace desmoke
