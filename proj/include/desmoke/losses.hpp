#pragma once

#include "desmoke/network.hpp"
#include "desmoke/ssim.hpp"

namespace desmoke {

enum class SsimVariant { none, ssim, ms_ssim };

const char* ssim_variant_name(SsimVariant v);
SsimVariant ssim_variant_from_name(const std::string& name);

// Coefficients of the composite generator objective:
//   lambda_adv * (-log D(fake)) + sum_t lambda_perc[t] * |taps_real - taps_fake|
//   + lambda_ssim * (-ssim_variant) + lambda_l1 * L1
struct LossWeights {
    double lambda_adv = 1.0;
    std::vector<double> lambda_perc = {1.0, 1.0, 1.0};
    double lambda_ssim = 10.0;
    double lambda_l1 = 10.0;
    SsimVariant ssim_variant = SsimVariant::ms_ssim;

    void validate(std::size_t tap_count) const;
};

struct GanLosses {
    double loss_d = 0.0;
    double loss_g_adv = 0.0;
};

// Probabilities are clamped into [1e-7, 1-1e-7]. loss_D is the averaged
// two-sided cross entropy, loss_G the non-saturating -log d_fake.
GanLosses gan_losses(double d_real, double d_fake);
GanLosses gan_losses(const std::vector<double>& d_real, const std::vector<double>& d_fake);

// Weighted mean-absolute-difference between tap activations of the real
// and fake discriminator passes. d_fake, when given, receives the
// gradient w.r.t. the fake-path activations.
double perceptual_loss(const std::vector<Tensor>& taps_real, const std::vector<Tensor>& taps_fake,
                       const std::vector<double>& weights, std::vector<Tensor>* d_fake);

struct GenLossResult {
    double total = 0.0;
    double adv = 0.0;
    double perc = 0.0;
    double ssim = 0.0;  // the loss term (negated similarity)
    double l1 = 0.0;
    Tensor d_fake;  // gradient of total w.r.t. the generator output
};

// Runs the discriminator on (condition, clean) and (condition, fake),
// evaluates the composite loss, and backpropagates the adversarial and
// perceptual parts through the discriminator (polluting its parameter
// gradients; callers zero them before their own D step).
GenLossResult composite_generator_loss(Discriminator& disc, const Tensor& condition,
                                       const Tensor& clean, const Tensor& fake,
                                       const LossWeights& weights, Mode mode);

}  // namespace desmoke
