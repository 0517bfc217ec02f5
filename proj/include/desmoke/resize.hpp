#pragma once

#include "desmoke/image.hpp"

namespace desmoke {

// Placement of the resized content inside a padded target frame.
struct FitRect {
    int x = 0, y = 0;      // top-left of the content
    int width = 0, height = 0;
};

// Where resize_and_pad puts the image content for a given source size.
FitRect fit_rect(int src_w, int src_h, int target_w, int target_h);

// Bilinear resample (half-pixel centers) to exactly new_w x new_h.
Image resize_bilinear(const Image& img, int new_w, int new_h);

// Aspect-preserving bilinear resize so the larger side meets the target,
// then symmetric zero padding of the other side. Output is exactly
// target_w x target_h; padded pixels are 0.
Image resize_and_pad(const Image& img, int target_w, int target_h);

// The content region of `img` assuming it was produced by resize_and_pad
// from a source of size src_w x src_h.
Image crop(const Image& img, const FitRect& rect);

}  // namespace desmoke
