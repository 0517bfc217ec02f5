#pragma once

// Brute-force reference implementations, kept independent of the library
// code paths they check. Everything here is direct-loop and slow.

#include <functional>
#include <vector>

#include "desmoke/image.hpp"
#include "desmoke/ssim.hpp"
#include "desmoke/tensor.hpp"

namespace desmoke::oracle {

double naive_rmse(const Image& ref, const Image& test);
double naive_psnr(const Image& ref, const Image& test);

// Direct windowed SSIM with explicit 2-D outer-product weights.
double naive_ssim(const Image& ref, const Image& test, const SsimParams& p);

// Per-scale mean contrast-structure, full SSIM at the coarsest scale,
// weighted geometric product; 2x2 mean pooling between scales.
double naive_ms_ssim(const Image& ref, const Image& test, const MsSsimParams& p);

// Per-pixel min over channels then brute-force window min.
std::vector<double> naive_dark_channel(const Image& img, int patch);

// Direct 7-loop convolution matching the library's geometry.
Tensor naive_conv2d(const Tensor& x, const std::vector<double>& w, const std::vector<double>& b,
                    int co, int kh, int kw, int stride, int pad);

// Central finite differences of a scalar function w.r.t. a buffer.
std::vector<double> finite_diff(const std::function<double()>& f, double* x, std::size_t n,
                                double h);

// Central differences evaluated at h and h/2. Coordinates where the two
// secants disagree are marked unreliable: the function is locally
// non-smooth there (e.g. a LeakyReLU kink inside the probe window) and
// has no derivative to compare against.
struct CheckedDiff {
    std::vector<double> grad;            // the h/2 secant
    std::vector<std::uint8_t> reliable;  // 1 = smooth at this coordinate
    std::size_t unreliable_count = 0;
};
CheckedDiff finite_diff_checked(const std::function<double()>& f, double* x, std::size_t n,
                                double h);

// max_rel_err restricted to the reliable coordinates.
double max_rel_err_reliable(const std::vector<double>& a, const CheckedDiff& fd,
                            double floor = 1e-6);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
double max_rel_err(const std::vector<double>& a, const std::vector<double>& b,
                   double floor = 1e-6);

}  // namespace desmoke::oracle
