#pragma once

#include <array>

#include "desmoke/image.hpp"
#include "desmoke/smoke.hpp"

namespace desmoke {

struct DcpParams {
    int patch_size = 15;              // dark-channel window, odd
    double omega = 0.95;              // haze retention factor
    double t_floor = 0.1;             // minimum transmission
    double airlight_fraction = 0.001; // top dark-channel pixels for A
    int guided_radius = 40;
    double guided_eps = 1e-3;
};

// Per-pixel min over channels, then min over the patch neighborhood
// (edge-replicated).
std::vector<double> dark_channel(const Image& img, int patch);

// A = the input pixel with the highest channel sum among the brightest
// `fraction` of dark-channel pixels; ties pick the smallest row-major
// index.
std::array<double, 3> estimate_airlight(const Image& img, const std::vector<double>& dark,
                                        double fraction);

// 1 - omega * dark_channel(img/A), clamped to [t_floor, 1]; no refinement.
TransmissionMap estimate_transmission_raw(const Image& img, const std::array<double, 3>& airlight,
                                          const DcpParams& params);

// Raw estimate refined with a guided filter (guide = grayscale input),
// clamped back to [t_floor, 1].
TransmissionMap estimate_transmission(const Image& img, const std::array<double, 3>& airlight,
                                      const DcpParams& params);

// Full dark-channel-prior pipeline: J = (I - A)/max(t, t_floor) + A.
Image dehaze_dcp(const Image& img, const DcpParams& params = {});

}  // namespace desmoke
