#pragma once

#include "desmoke/checkpoint.hpp"
#include "desmoke/dataset.hpp"
#include "desmoke/losses.hpp"

namespace desmoke {

struct TrainConfig {
    double learning_rate = 2e-4;
    double beta1 = 0.5;  // ADAM momentum
    double beta2 = 0.999;
    int batch_size = 4;
    int epochs = 20;      // desk-scale default
    int image_size = 64;  // desk-scale default
    std::uint64_t seed = 0;

    void validate() const;
};

struct EpochLog {
    int epoch = 0;
    double loss_d = 0.0;
    double loss_g_adv = 0.0;
    double loss_perc = 0.0;
    double loss_ssim = 0.0;
    double loss_l1 = 0.0;
    double val_ssim = 0.0;
    double val_grid_score = 0.0;
    double seconds = 0.0;
};

struct TrainResult {
    std::string checkpoint_path;
    std::string log_path;
    std::vector<EpochLog> epochs;
};

// Alternating D-step/G-step training over the manifest pairs, resized
// and zero-padded to config.image_size. Deterministic for a fixed seed
// in the (default) single-threaded math path. Writes checkpoint.bin and
// log.csv under out_dir. `val` supplies the per-epoch validation pairs;
// when null the first few training pairs are probed instead.
TrainResult train(const DatasetManifest& data, const DatasetManifest* val,
                  const NetworkSpec& spec, const LossWeights& weights, const TrainConfig& config,
                  const std::string& out_dir);

// Eval-mode generator wrapped for repeated inference.
class InferenceModel {
public:
    explicit InferenceModel(const Checkpoint& ck);

    // resize_and_pad to the checkpoint size, one forward pass.
    Image run(const Image& img);
    int image_size() const { return size_; }
    const NetworkSpec& spec() const { return gen_.spec(); }

private:
    int size_;
    Generator gen_;
};

Image infer(const Checkpoint& ck, const Image& img);

// NCHW bridge to the Image type (one batch item per image).
Tensor images_to_tensor(const std::vector<const Image*>& imgs);
Image tensor_item_to_image(const Tensor& t, int item);

}  // namespace desmoke
