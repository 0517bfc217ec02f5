#pragma once

#include <string>

#include "desmoke/image.hpp"

namespace desmoke {

// Reads an 8- or 16-bit PNG or binary PPM (P6). Values are normalized by
// the format's max value into [0,1]; alpha is dropped; palette images are
// expanded to RGB. Format is detected from the file's magic bytes.
Image load_image(const std::string& path);

// Writes an 8-bit PNG or PPM depending on the extension (.png / .ppm);
// values are quantized with round-half-up to v*255.
void save_image(const Image& img, const std::string& path);

}  // namespace desmoke
