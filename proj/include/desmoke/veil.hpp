#pragma once

#include "desmoke/image.hpp"

namespace desmoke {

// Atmospheric-veil removal: estimates the additive veil A*(1-t) as a
// morphological opening of the channel-min map scaled by `strength`,
// caps it below the per-pixel channel minimum, and inverts
// I = J*(1 - V/A) + V per channel.
Image remove_veil(const Image& img, double strength, int structuring_radius = 15);

}  // namespace desmoke
