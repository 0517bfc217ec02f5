#pragma once

#include <memory>
#include <string>

#include "desmoke/layers.hpp"

namespace desmoke {

enum class LayerKind { conv3x3, deconv4x4, batchnorm, leaky_relu, tanh_out };

struct LayerSpec {
    LayerKind kind = LayerKind::conv3x3;
    int filters = 0;
    int stride = 1;
    double leaky_slope = 0.2;
};

// Declarative shape of both networks. Encoder blocks are stride-2 3x3
// conv + BN + LeakyReLU; decoder blocks are stride-2 4x4 deconv + BN +
// LeakyReLU with the matching encoder output concatenated after each
// block; a final 4x4 deconv and a (tanh+1)/2 head emit the image.
struct NetworkSpec {
    int image_channels = 3;
    std::vector<int> gen_encoder = {16, 32, 64};
    std::vector<int> gen_decoder = {32, 16};  // mirrored; final deconv emits image_channels
    std::vector<int> disc_filters = {16, 32, 64};
    std::vector<int> tap_layers = {0, 1, 2};  // discriminator blocks feeding the perceptual loss
    double leaky_slope = 0.2;

    void validate() const;
    // Expanded per-layer description of the generator (for inspection
    // and serialization checks).
    std::vector<LayerSpec> generator_layers() const;
};

class Generator {
public:
    Generator(const NetworkSpec& spec, Rng& init_rng);

    // Input spatial dims must be divisible by 2^depth. Output is the
    // same shape as the input, values in [0,1].
    Tensor forward(const Tensor& x, Mode mode);
    Tensor backward(const Tensor& dy);

    std::vector<Param*> params();
    // Params plus batch-norm running stats, in serialization order.
    std::vector<std::pair<std::string, std::vector<double>*>> state_buffers();
    const NetworkSpec& spec() const { return spec_; }
    void zero_grad();

private:
    struct EncBlock {
        Conv2dLayer conv;
        BatchNorm2dLayer bn;
        LeakyReluLayer act;
    };
    struct DecBlock {
        Deconv2dLayer deconv;
        BatchNorm2dLayer bn;
        LeakyReluLayer act;
    };

    NetworkSpec spec_;
    std::vector<EncBlock> enc_;
    std::vector<DecBlock> dec_;
    std::unique_ptr<Deconv2dLayer> out_deconv_;
    TanhHead head_;
    std::vector<int> skip_channels_;  // channels of each cached encoder output
};

struct DiscOutput {
    std::vector<double> probs;   // sigmoid(mean logit) per batch item, in (0,1)
    std::vector<double> logits;  // pre-sigmoid per-item values
    std::vector<Tensor> taps;    // activations at spec.tap_layers
};

class Discriminator {
public:
    Discriminator(const NetworkSpec& spec, Rng& init_rng);

    // Input is the channel-concatenated (condition, candidate) pair.
    DiscOutput forward(const Tensor& pair, Mode mode);

    // d_logits: dLoss/d(logit) per batch item. d_taps (optional, aligned
    // with spec.tap_layers) injects gradients at the tapped activations.
    // Returns dLoss/d(input pair); accumulates parameter gradients.
    Tensor backward(const std::vector<double>& d_logits, const std::vector<Tensor>* d_taps);

    std::vector<Param*> params();
    std::vector<std::pair<std::string, std::vector<double>*>> state_buffers();
    const NetworkSpec& spec() const { return spec_; }
    void zero_grad();

private:
    struct Block {
        Conv2dLayer conv;
        BatchNorm2dLayer bn;
        LeakyReluLayer act;
    };

    NetworkSpec spec_;
    std::vector<Block> blocks_;
    std::unique_ptr<Conv2dLayer> head_;
    Tensor head_out_;  // cached logit map for global-average backward
};

// sigmoid with the (0,1) open-interval guarantee of doubles
double sigmoid(double z);

}  // namespace desmoke
