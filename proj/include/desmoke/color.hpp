#pragma once

#include "desmoke/image.hpp"

namespace desmoke {

// Per-pixel sRGB (D65) -> linear RGB -> XYZ -> CIELAB.
LabImage rgb_to_lab(const Image& img);

}  // namespace desmoke
