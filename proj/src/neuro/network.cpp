#include "desmoke/network.hpp"

#include <algorithm>
#include <cmath>

#include "desmoke/kernels.hpp"

namespace desmoke {

namespace {

void init_conv(Param& weight, Rng& rng) {
    for (double& v : weight.value) v = 0.02 * rng.normal();
}

void init_bn(BatchNorm2dLayer& bn, Rng& rng) {
    for (double& v : bn.gamma.value) v = 1.0 + 0.02 * rng.normal();
}

}  // namespace

double sigmoid(double z) {
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void NetworkSpec::validate() const {
    require(image_channels == 1 || image_channels == 3, ErrorKind::argument,
            "image_channels must be 1 or 3");
    require(!gen_encoder.empty(), ErrorKind::argument, "empty generator encoder");
    require(gen_decoder.size() + 1 == gen_encoder.size(), ErrorKind::argument,
            "decoder must mirror the encoder (one fewer block)");
    require(!disc_filters.empty(), ErrorKind::argument, "empty discriminator");
    int prev_tap = -1;
    for (int t : tap_layers) {
        require(t >= 0 && t < static_cast<int>(disc_filters.size()), ErrorKind::argument,
                "tap layer out of range");
        require(t > prev_tap, ErrorKind::argument, "tap layers must be strictly ascending");
        prev_tap = t;
    }
    for (int f : gen_encoder) require(f > 0, ErrorKind::argument, "bad filter count");
    for (int f : gen_decoder) require(f > 0, ErrorKind::argument, "bad filter count");
    for (int f : disc_filters) require(f > 0, ErrorKind::argument, "bad filter count");
}

std::vector<LayerSpec> NetworkSpec::generator_layers() const {
    std::vector<LayerSpec> out;
    for (int f : gen_encoder) {
        out.push_back({LayerKind::conv3x3, f, 2, leaky_slope});
        out.push_back({LayerKind::batchnorm, f, 1, leaky_slope});
        out.push_back({LayerKind::leaky_relu, f, 1, leaky_slope});
    }
    for (int f : gen_decoder) {
        out.push_back({LayerKind::deconv4x4, f, 2, leaky_slope});
        out.push_back({LayerKind::batchnorm, f, 1, leaky_slope});
        out.push_back({LayerKind::leaky_relu, f, 1, leaky_slope});
    }
    out.push_back({LayerKind::deconv4x4, image_channels, 2, leaky_slope});
    out.push_back({LayerKind::tanh_out, image_channels, 1, leaky_slope});
    return out;
}

Generator::Generator(const NetworkSpec& spec, Rng& init_rng) : spec_(spec) {
    spec_.validate();
    const int depth = static_cast<int>(spec_.gen_encoder.size());

    int in_ch = spec_.image_channels;
    for (int i = 0; i < depth; ++i) {
        const int out_ch = spec_.gen_encoder[static_cast<std::size_t>(i)];
        EncBlock b{Conv2dLayer("gen.enc" + std::to_string(i), in_ch, out_ch, 3, 2, 1),
                   BatchNorm2dLayer("gen.enc" + std::to_string(i) + ".bn", out_ch),
                   LeakyReluLayer(spec_.leaky_slope)};
        init_conv(b.conv.weight, init_rng);
        init_bn(b.bn, init_rng);
        enc_.push_back(std::move(b));
        in_ch = out_ch;
    }

    for (std::size_t j = 0; j < spec_.gen_decoder.size(); ++j) {
        const int out_ch = spec_.gen_decoder[j];
        DecBlock b{Deconv2dLayer("gen.dec" + std::to_string(j), in_ch, out_ch, 4, 2, 1),
                   BatchNorm2dLayer("gen.dec" + std::to_string(j) + ".bn", out_ch),
                   LeakyReluLayer(spec_.leaky_slope)};
        init_conv(b.deconv.weight, init_rng);
        init_bn(b.bn, init_rng);
        dec_.push_back(std::move(b));
        // next block sees this output concatenated with the skip
        const int skip = spec_.gen_encoder[spec_.gen_encoder.size() - 2 - j];
        in_ch = out_ch + skip;
    }

    out_deconv_ = std::make_unique<Deconv2dLayer>("gen.out", in_ch, spec_.image_channels, 4, 2, 1);
    init_conv(out_deconv_->weight, init_rng);
}

Tensor Generator::forward(const Tensor& x, Mode mode) {
    require(x.c == spec_.image_channels, ErrorKind::shape, "generator: channel mismatch");
    const int depth = static_cast<int>(enc_.size());
    require(x.h % (1 << depth) == 0 && x.w % (1 << depth) == 0, ErrorKind::shape,
            "generator: input dims must be divisible by 2^depth");

    std::vector<Tensor> enc_out;
    Tensor cur = x;
    for (auto& b : enc_) {
        cur = b.act.forward(b.bn.forward(b.conv.forward(cur), mode));
        enc_out.push_back(cur);
    }

    skip_channels_.clear();
    for (std::size_t j = 0; j < dec_.size(); ++j) {
        auto& b = dec_[j];
        cur = b.act.forward(b.bn.forward(b.deconv.forward(cur), mode));
        const Tensor& skip = enc_out[enc_out.size() - 2 - j];
        skip_channels_.push_back(skip.c);
        cur = concat_channels(cur, skip);
    }
    return head_.forward(out_deconv_->forward(cur));
}

Tensor Generator::backward(const Tensor& dy) {
    Tensor g = out_deconv_->backward(head_.backward(dy));

    // Unwind decoder blocks, collecting skip gradients for the encoder.
    std::vector<Tensor> skip_grads(dec_.size());
    for (std::size_t jr = 0; jr < dec_.size(); ++jr) {
        const std::size_t j = dec_.size() - 1 - jr;
        auto& b = dec_[j];
        Tensor d_dec(g.n, g.c - skip_channels_[j], g.h, g.w);
        Tensor d_skip(g.n, skip_channels_[j], g.h, g.w);
        split_channels(g, d_dec, d_skip);
        skip_grads[j] = std::move(d_skip);
        g = b.deconv.backward(b.bn.backward(b.act.backward(d_dec)));
    }

    // Encoder in reverse; skip j taps the output of encoder block
    // (depth-2-j), whose gradient joins after the deeper block unwinds.
    for (std::size_t ir = 0; ir < enc_.size(); ++ir) {
        const std::size_t i = enc_.size() - 1 - ir;
        auto& b = enc_[i];
        g = b.conv.backward(b.bn.backward(b.act.backward(g)));
        if (i >= 1) {
            const std::size_t j = enc_.size() - 1 - i;  // skip fed by block i-1
            if (j < skip_grads.size()) {
                kernels::axpy(g.size(), 1.0, skip_grads[j].data.data(), g.data.data());
            }
        }
    }
    return g;
}

std::vector<Param*> Generator::params() {
    std::vector<Param*> out;
    for (auto& b : enc_) {
        out.push_back(&b.conv.weight);
        out.push_back(&b.conv.bias);
        out.push_back(&b.bn.gamma);
        out.push_back(&b.bn.beta);
    }
    for (auto& b : dec_) {
        out.push_back(&b.deconv.weight);
        out.push_back(&b.deconv.bias);
        out.push_back(&b.bn.gamma);
        out.push_back(&b.bn.beta);
    }
    out.push_back(&out_deconv_->weight);
    out.push_back(&out_deconv_->bias);
    return out;
}

std::vector<std::pair<std::string, std::vector<double>*>> Generator::state_buffers() {
    std::vector<std::pair<std::string, std::vector<double>*>> out;
    for (Param* p : params()) out.emplace_back(p->name, &p->value);
    int i = 0;
    for (auto& b : enc_) {
        out.emplace_back("gen.enc" + std::to_string(i) + ".bn.running_mean", &b.bn.running_mean);
        out.emplace_back("gen.enc" + std::to_string(i) + ".bn.running_var", &b.bn.running_var);
        ++i;
    }
    i = 0;
    for (auto& b : dec_) {
        out.emplace_back("gen.dec" + std::to_string(i) + ".bn.running_mean", &b.bn.running_mean);
        out.emplace_back("gen.dec" + std::to_string(i) + ".bn.running_var", &b.bn.running_var);
        ++i;
    }
    return out;
}

void Generator::zero_grad() {
    for (Param* p : params()) p->zero_grad();
}

Discriminator::Discriminator(const NetworkSpec& spec, Rng& init_rng) : spec_(spec) {
    spec_.validate();
    int in_ch = 2 * spec_.image_channels;  // (condition, candidate)
    int i = 0;
    for (int out_ch : spec_.disc_filters) {
        Block b{Conv2dLayer("disc.b" + std::to_string(i), in_ch, out_ch, 3, 2, 1),
                BatchNorm2dLayer("disc.b" + std::to_string(i) + ".bn", out_ch),
                LeakyReluLayer(spec_.leaky_slope)};
        init_conv(b.conv.weight, init_rng);
        init_bn(b.bn, init_rng);
        blocks_.push_back(std::move(b));
        in_ch = out_ch;
        ++i;
    }
    head_ = std::make_unique<Conv2dLayer>("disc.head", in_ch, 1, 3, 1, 1);
    init_conv(head_->weight, init_rng);
}

DiscOutput Discriminator::forward(const Tensor& pair, Mode mode) {
    require(pair.c == 2 * spec_.image_channels, ErrorKind::shape,
            "discriminator expects a (condition, candidate) channel pair");
    DiscOutput out;
    Tensor cur = pair;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        auto& b = blocks_[i];
        cur = b.act.forward(b.bn.forward(b.conv.forward(cur), mode));
        if (std::find(spec_.tap_layers.begin(), spec_.tap_layers.end(), static_cast<int>(i)) !=
            spec_.tap_layers.end()) {
            out.taps.push_back(cur);
        }
    }
    head_out_ = head_->forward(cur);

    out.logits.resize(head_out_.n);
    out.probs.resize(head_out_.n);
    const double inv = 1.0 / static_cast<double>(head_out_.plane_size());
    for (int ni = 0; ni < head_out_.n; ++ni) {
        const double z = kernels::sum(head_out_.plane_size(), head_out_.plane(ni, 0)) * inv;
        out.logits[static_cast<std::size_t>(ni)] = z;
        out.probs[static_cast<std::size_t>(ni)] = sigmoid(z);
    }
    return out;
}

Tensor Discriminator::backward(const std::vector<double>& d_logits,
                               const std::vector<Tensor>* d_taps) {
    require(static_cast<int>(d_logits.size()) == head_out_.n, ErrorKind::shape,
            "discriminator backward: batch mismatch");
    Tensor d_head(head_out_.n, 1, head_out_.h, head_out_.w);
    const double inv = 1.0 / static_cast<double>(head_out_.plane_size());
    for (int ni = 0; ni < d_head.n; ++ni) {
        std::fill(d_head.plane(ni, 0), d_head.plane(ni, 0) + d_head.plane_size(),
                  d_logits[static_cast<std::size_t>(ni)] * inv);
    }
    Tensor g = head_->backward(d_head);

    int tap_idx = static_cast<int>(spec_.tap_layers.size()) - 1;
    for (std::size_t ir = 0; ir < blocks_.size(); ++ir) {
        const std::size_t i = blocks_.size() - 1 - ir;
        if (d_taps && tap_idx >= 0 &&
            spec_.tap_layers[static_cast<std::size_t>(tap_idx)] == static_cast<int>(i)) {
            const Tensor& inject = (*d_taps)[static_cast<std::size_t>(tap_idx)];
            require(inject.same_shape(g), ErrorKind::shape, "tap gradient shape mismatch");
            kernels::axpy(g.size(), 1.0, inject.data.data(), g.data.data());
            --tap_idx;
        }
        auto& b = blocks_[i];
        g = b.conv.backward(b.bn.backward(b.act.backward(g)));
    }
    return g;
}

std::vector<Param*> Discriminator::params() {
    std::vector<Param*> out;
    for (auto& b : blocks_) {
        out.push_back(&b.conv.weight);
        out.push_back(&b.conv.bias);
        out.push_back(&b.bn.gamma);
        out.push_back(&b.bn.beta);
    }
    out.push_back(&head_->weight);
    out.push_back(&head_->bias);
    return out;
}

std::vector<std::pair<std::string, std::vector<double>*>> Discriminator::state_buffers() {
    std::vector<std::pair<std::string, std::vector<double>*>> out;
    for (Param* p : params()) out.emplace_back(p->name, &p->value);
    int i = 0;
    for (auto& b : blocks_) {
        out.emplace_back("disc.b" + std::to_string(i) + ".bn.running_mean", &b.bn.running_mean);
        out.emplace_back("disc.b" + std::to_string(i) + ".bn.running_var", &b.bn.running_var);
        ++i;
    }
    return out;
}

void Discriminator::zero_grad() {
    for (Param* p : params()) p->zero_grad();
}

}  // namespace desmoke
