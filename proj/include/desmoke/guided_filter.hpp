#pragma once

#include <vector>

namespace desmoke {

// Normalized box mean over a (2r+1)^2 window clipped to the image.
std::vector<double> box_mean(const std::vector<double>& src, int w, int h, int radius);

// He et al. guided filter: edge-preserving smoothing of `input` steered
// by `guide` (both single-channel, same size).
std::vector<double> guided_filter(const std::vector<double>& guide,
                                  const std::vector<double>& input, int w, int h, int radius,
                                  double eps);

// Separable running min/max over a centered window of the given full
// size (odd); borders clamp to the image (edge replication).
std::vector<double> min_filter(const std::vector<double>& src, int w, int h, int window);
std::vector<double> max_filter(const std::vector<double>& src, int w, int h, int window);

}  // namespace desmoke
