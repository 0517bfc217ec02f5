#pragma once

#include <vector>

#include "desmoke/image.hpp"

namespace desmoke {

// Gaussian-window SSIM parameters. c1/c2 follow from the stabilizers and
// the dynamic range: c1 = (k1*L)^2, c2 = (k2*L)^2.
struct SsimParams {
    int window_size = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;

    double c1() const { return (k1 * dynamic_range) * (k1 * dynamic_range); }
    double c2() const { return (k2 * dynamic_range) * (k2 * dynamic_range); }

    // 1-D window weights, normalized to sum 1; the 2-D window is their
    // outer product.
    std::vector<double> window() const;
};

struct MsSsimParams {
    int scales = 5;
    std::vector<double> weights = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    SsimParams base;

    // Largest scale count usable for a w x h image (capped at 5), with
    // the standard weight prefix renormalized to sum 1.
    static MsSsimParams for_size(int w, int h, const SsimParams& base = {});
};

// Buffer-level API shared by the Image metrics and the training loss.
// Layout is planar channel-major (the Image layout, and the layout of one
// batch item of a NCHW tensor). When `grad` is non-null it receives
// d(value)/d(test), same size as the inputs.
double ssim_buf(const double* ref, const double* test, int w, int h, int channels,
                const SsimParams& p, double* grad);
double ms_ssim_buf(const double* ref, const double* test, int w, int h, int channels,
                   const MsSsimParams& p, double* grad);

double ssim(const Image& ref, const Image& test, const SsimParams& p = {});
double ssim_loss(const Image& ref, const Image& test, const SsimParams& p = {});
std::vector<double> ssim_grad(const Image& ref, const Image& test, const SsimParams& p = {});

double ms_ssim(const Image& ref, const Image& test, const MsSsimParams& p = {});
std::vector<double> ms_ssim_grad(const Image& ref, const Image& test, const MsSsimParams& p = {});

}  // namespace desmoke
