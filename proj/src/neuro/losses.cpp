#include "desmoke/losses.hpp"

#include <algorithm>
#include <cmath>

#include "desmoke/kernels.hpp"

namespace desmoke {

namespace {

constexpr double kProbClamp = 1e-7;

inline double clamp_prob(double p) {
    return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

}  // namespace

const char* ssim_variant_name(SsimVariant v) {
    switch (v) {
        case SsimVariant::none: return "none";
        case SsimVariant::ssim: return "ssim";
        default: return "ms_ssim";
    }
}

SsimVariant ssim_variant_from_name(const std::string& name) {
    if (name == "none") return SsimVariant::none;
    if (name == "ssim") return SsimVariant::ssim;
    if (name == "ms_ssim") return SsimVariant::ms_ssim;
    fail(ErrorKind::argument, "unknown ssim variant: " + name);
}

void LossWeights::validate(std::size_t tap_count) const {
    require(lambda_adv >= 0.0 && lambda_ssim >= 0.0 && lambda_l1 >= 0.0, ErrorKind::argument,
            "loss weights must be non-negative");
    double total = lambda_adv + lambda_ssim + lambda_l1;
    for (double w : lambda_perc) {
        require(w >= 0.0, ErrorKind::argument, "loss weights must be non-negative");
        total += w;
    }
    require(total > 0.0, ErrorKind::argument, "at least one loss weight must be positive");
    require(lambda_perc.size() == tap_count, ErrorKind::argument,
            "lambda_perc length must match the tap count");
}

GanLosses gan_losses(double d_real, double d_fake) {
    const double r = clamp_prob(d_real);
    const double f = clamp_prob(d_fake);
    GanLosses out;
    out.loss_d = -0.5 * (std::log(r) + std::log(1.0 - f));
    out.loss_g_adv = -std::log(f);
    return out;
}

GanLosses gan_losses(const std::vector<double>& d_real, const std::vector<double>& d_fake) {
    require(!d_real.empty() && d_real.size() == d_fake.size(), ErrorKind::argument,
            "gan_losses: batch size mismatch");
    GanLosses out;
    for (std::size_t i = 0; i < d_real.size(); ++i) {
        GanLosses g = gan_losses(d_real[i], d_fake[i]);
        out.loss_d += g.loss_d;
        out.loss_g_adv += g.loss_g_adv;
    }
    out.loss_d /= static_cast<double>(d_real.size());
    out.loss_g_adv /= static_cast<double>(d_real.size());
    return out;
}

double perceptual_loss(const std::vector<Tensor>& taps_real, const std::vector<Tensor>& taps_fake,
                       const std::vector<double>& weights, std::vector<Tensor>* d_fake) {
    require(taps_real.size() == taps_fake.size() && taps_real.size() == weights.size(),
            ErrorKind::shape, "perceptual_loss: tap count mismatch");
    if (d_fake) d_fake->clear();
    double total = 0.0;
    for (std::size_t t = 0; t < taps_real.size(); ++t) {
        const Tensor& r = taps_real[t];
        const Tensor& f = taps_fake[t];
        require(r.same_shape(f), ErrorKind::shape, "perceptual_loss: tap shape mismatch");
        const double inv = 1.0 / static_cast<double>(r.size());
        total += weights[t] * kernels::sum_abs_diff(r.size(), r.data.data(), f.data.data()) * inv;
        if (d_fake) {
            Tensor g(f.n, f.c, f.h, f.w);
            const double scale = weights[t] * inv;
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double d = f.data[i] - r.data[i];
                g.data[i] = d > 0.0 ? scale : d < 0.0 ? -scale : 0.0;
            }
            d_fake->push_back(std::move(g));
        }
    }
    return total;
}

GenLossResult composite_generator_loss(Discriminator& disc, const Tensor& condition,
                                       const Tensor& clean, const Tensor& fake,
                                       const LossWeights& weights, Mode mode) {
    require(condition.same_shape(clean) && clean.same_shape(fake), ErrorKind::shape,
            "composite_generator_loss: tensor shapes differ");
    weights.validate(disc.spec().tap_layers.size());

    GenLossResult out;
    out.d_fake = Tensor(fake.n, fake.c, fake.h, fake.w);
    const int batch = fake.n;
    const std::size_t item = fake.item_size();

    // Pixel-space terms first: ssim variant and L1.
    if (weights.lambda_ssim > 0.0 && weights.ssim_variant != SsimVariant::none) {
        std::vector<double> g(item);
        double mean_sim = 0.0;
        for (int ni = 0; ni < batch; ++ni) {
            double sim;
            if (weights.ssim_variant == SsimVariant::ssim) {
                sim = ssim_buf(clean.item(ni), fake.item(ni), fake.w, fake.h, fake.c,
                               SsimParams{}, g.data());
            } else {
                sim = ms_ssim_buf(clean.item(ni), fake.item(ni), fake.w, fake.h, fake.c,
                                  MsSsimParams::for_size(fake.w, fake.h), g.data());
            }
            mean_sim += sim;
            kernels::axpy(item, -weights.lambda_ssim / batch, g.data(),
                          out.d_fake.item(ni));
        }
        out.ssim = -mean_sim / batch;
    }

    if (weights.lambda_l1 > 0.0) {
        const double inv = 1.0 / static_cast<double>(fake.size());
        out.l1 = kernels::sum_abs_diff(fake.size(), fake.data.data(), clean.data.data()) * inv;
        const double scale = weights.lambda_l1 * inv;
        for (std::size_t i = 0; i < fake.size(); ++i) {
            const double d = fake.data[i] - clean.data[i];
            out.d_fake.data[i] += d > 0.0 ? scale : d < 0.0 ? -scale : 0.0;
        }
    }

    // Discriminator passes: real taps first, fake pass cached for backward.
    DiscOutput real_out = disc.forward(concat_channels(condition, clean), mode);
    DiscOutput fake_out = disc.forward(concat_channels(condition, fake), mode);

    std::vector<Tensor> d_taps;
    out.perc = perceptual_loss(real_out.taps, fake_out.taps, weights.lambda_perc, &d_taps);
    // perceptual_loss already applies per-tap weights; nothing to rescale.

    std::vector<double> d_logits(static_cast<std::size_t>(batch), 0.0);
    for (int ni = 0; ni < batch; ++ni) {
        const double p = clamp_prob(fake_out.probs[static_cast<std::size_t>(ni)]);
        out.adv += -std::log(p);
        // d(-log sigmoid(z))/dz = p - 1
        d_logits[static_cast<std::size_t>(ni)] =
            weights.lambda_adv * (fake_out.probs[static_cast<std::size_t>(ni)] - 1.0) / batch;
    }
    out.adv /= batch;

    const bool need_disc_grad =
        weights.lambda_adv > 0.0 ||
        std::any_of(weights.lambda_perc.begin(), weights.lambda_perc.end(),
                    [](double w) { return w > 0.0; });
    if (need_disc_grad) {
        if (weights.lambda_adv == 0.0) std::fill(d_logits.begin(), d_logits.end(), 0.0);
        Tensor d_pair = disc.backward(d_logits, &d_taps);
        // candidate half of the (condition, candidate) gradient
        Tensor d_cond(d_pair.n, condition.c, d_pair.h, d_pair.w);
        Tensor d_cand(d_pair.n, fake.c, d_pair.h, d_pair.w);
        split_channels(d_pair, d_cond, d_cand);
        kernels::axpy(out.d_fake.size(), 1.0, d_cand.data.data(), out.d_fake.data.data());
    }

    out.total = weights.lambda_adv * out.adv + out.perc + weights.lambda_ssim * out.ssim +
                weights.lambda_l1 * out.l1;
    return out;
}

}  // namespace desmoke
