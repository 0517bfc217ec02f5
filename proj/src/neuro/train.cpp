#include "desmoke/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>

#include "desmoke/adam.hpp"
#include "desmoke/image_io.hpp"
#include "desmoke/kernels.hpp"
#include "desmoke/resize.hpp"
#include "desmoke/spectrum.hpp"

namespace fs = std::filesystem;

namespace desmoke {

namespace {

struct LoadedPair {
    Image clean;
    Image smoky;
};

std::vector<LoadedPair> load_pairs(const DatasetManifest& data, int image_size) {
    std::vector<LoadedPair> out;
    out.reserve(data.entries.size());
    for (const auto& e : data.entries) {
        LoadedPair p;
        p.clean = resize_and_pad(load_image(e.clean_path), image_size, image_size);
        p.smoky = resize_and_pad(load_image(e.smoke_path), image_size, image_size);
        out.push_back(std::move(p));
    }
    return out;
}

Tensor batch_tensor(const std::vector<LoadedPair>& pairs, const std::vector<std::size_t>& idx,
                    std::size_t begin, std::size_t end, bool smoky) {
    std::vector<const Image*> items;
    for (std::size_t i = begin; i < end; ++i) {
        const LoadedPair& p = pairs[idx[i]];
        items.push_back(smoky ? &p.smoky : &p.clean);
    }
    return images_to_tensor(items);
}

}  // namespace

void TrainConfig::validate() const {
    require(learning_rate > 0.0 && beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0,
            ErrorKind::argument, "bad optimizer config");
    require(batch_size >= 1 && epochs >= 1 && image_size >= 8, ErrorKind::argument,
            "bad training config");
}

Tensor images_to_tensor(const std::vector<const Image*>& imgs) {
    require(!imgs.empty(), ErrorKind::argument, "empty batch");
    const Image& first = *imgs[0];
    Tensor t(static_cast<int>(imgs.size()), first.channels, first.height, first.width);
    for (std::size_t i = 0; i < imgs.size(); ++i) {
        require(imgs[i]->width == first.width && imgs[i]->height == first.height &&
                    imgs[i]->channels == first.channels,
                ErrorKind::shape, "batch images must share a shape");
        std::memcpy(t.item(static_cast<int>(i)), imgs[i]->data.data(),
                    t.item_size() * sizeof(double));
    }
    return t;
}

Image tensor_item_to_image(const Tensor& t, int item) {
    require(item >= 0 && item < t.n, ErrorKind::argument, "batch item out of range");
    Image img(t.w, t.h, t.c);
    std::memcpy(img.data.data(), t.item(item), t.item_size() * sizeof(double));
    img.clamp01();
    return img;
}

TrainResult train(const DatasetManifest& data, const DatasetManifest* val,
                  const NetworkSpec& netspec, const LossWeights& weights,
                  const TrainConfig& config, const std::string& out_dir) {
    config.validate();
    netspec.validate();
    weights.validate(netspec.tap_layers.size());
    require(!data.entries.empty(), ErrorKind::argument, "train: empty dataset");

    fs::create_directories(out_dir);
    const std::string ckpt_path = (fs::path(out_dir) / "checkpoint.bin").string();
    const std::string log_path = (fs::path(out_dir) / "log.csv").string();

    std::vector<LoadedPair> pairs = load_pairs(data, config.image_size);
    std::vector<LoadedPair> val_pairs;
    if (val && !val->entries.empty()) {
        val_pairs = load_pairs(*val, config.image_size);
    } else {
        for (std::size_t i = 0; i < std::min<std::size_t>(8, pairs.size()); ++i) {
            val_pairs.push_back(pairs[i]);
        }
    }

    Rng init_rng(Rng::derive(config.seed, 1));
    Generator gen(netspec, init_rng);
    Discriminator disc(netspec, init_rng);

    AdamConfig adam{config.learning_rate, config.beta1, config.beta2, 1e-8};
    AdamOptimizer opt_g(gen.params(), adam);
    AdamOptimizer opt_d(disc.params(), adam);

    Rng shuffle_rng(Rng::derive(config.seed, 2));
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::FILE* log = std::fopen(log_path.c_str(), "wb");
    require(log != nullptr, ErrorKind::io, "cannot write " + log_path);
    std::fprintf(log,
                 "epoch,loss_D,loss_G_adv,loss_perc,loss_ssim,loss_l1,val_ssim,"
                 "val_grid_score,seconds\n");

    TrainResult result;
    result.checkpoint_path = ckpt_path;
    result.log_path = log_path;

    long g_steps = 0;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        shuffle_rng.shuffle(order);

        double ep_d = 0, ep_adv = 0, ep_perc = 0, ep_ssim = 0, ep_l1 = 0;
        std::size_t items_seen = 0;

        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(config.batch_size));
            const int n = static_cast<int>(end - begin);
            Tensor cond = batch_tensor(pairs, order, begin, end, /*smoky=*/true);
            Tensor clean = batch_tensor(pairs, order, begin, end, /*smoky=*/false);

            Tensor fake = gen.forward(cond, Mode::train);

            // --- discriminator step (fake detached) ---
            disc.zero_grad();
            DiscOutput real_out = disc.forward(concat_channels(cond, clean), Mode::train);
            std::vector<double> d_logits(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                d_logits[static_cast<std::size_t>(i)] =
                    0.5 * (real_out.probs[static_cast<std::size_t>(i)] - 1.0) / n;
            }
            disc.backward(d_logits, nullptr);
            DiscOutput fake_out = disc.forward(concat_channels(cond, fake), Mode::train);
            for (int i = 0; i < n; ++i) {
                d_logits[static_cast<std::size_t>(i)] =
                    0.5 * fake_out.probs[static_cast<std::size_t>(i)] / n;
            }
            disc.backward(d_logits, nullptr);
            opt_d.step();
            const double loss_d = gan_losses(real_out.probs, fake_out.probs).loss_d;

            // --- generator step ---
            gen.zero_grad();
            disc.zero_grad();  // scratch; the D gradients below are discarded
            GenLossResult res =
                composite_generator_loss(disc, cond, clean, fake, weights, Mode::train);
            gen.backward(res.d_fake);
            opt_g.step();
            ++g_steps;

            const bool finite = std::isfinite(loss_d) && std::isfinite(res.total);
            require(finite, ErrorKind::numeric,
                    "training diverged (non-finite loss) at epoch " + std::to_string(epoch) +
                        ", batch " + std::to_string(begin / config.batch_size));

            ep_d += loss_d * n;
            ep_adv += res.adv * n;
            ep_perc += res.perc * n;
            ep_ssim += res.ssim * n;
            ep_l1 += res.l1 * n;
            items_seen += static_cast<std::size_t>(n);
        }

        // validation probe in eval mode
        double val_ssim_total = 0.0;
        double val_grid_total = 0.0;
        for (const auto& p : val_pairs) {
            Tensor x = images_to_tensor({&p.smoky});
            Tensor y = gen.forward(x, Mode::eval);
            Image out = tensor_item_to_image(y, 0);
            val_ssim_total += ssim(p.clean, out);
            val_grid_total += grid_artifact_score(out);
        }
        const double inv_val = val_pairs.empty() ? 0.0 : 1.0 / val_pairs.size();

        EpochLog el;
        el.epoch = epoch;
        el.loss_d = ep_d / items_seen;
        el.loss_g_adv = ep_adv / items_seen;
        el.loss_perc = ep_perc / items_seen;
        el.loss_ssim = ep_ssim / items_seen;
        el.loss_l1 = ep_l1 / items_seen;
        el.val_ssim = val_ssim_total * inv_val;
        el.val_grid_score = val_grid_total * inv_val;
        el.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.epochs.push_back(el);

        std::fprintf(log, "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.3f\n", el.epoch, el.loss_d,
                     el.loss_g_adv, el.loss_perc, el.loss_ssim, el.loss_l1, el.val_ssim,
                     el.val_grid_score, el.seconds);
        std::fflush(log);

        save_checkpoint(snapshot(gen, &disc, config.image_size, g_steps), ckpt_path);
    }
    std::fclose(log);
    return result;
}

InferenceModel::InferenceModel(const Checkpoint& ck) : size_(ck.image_size), gen_([&] {
    Rng dummy(0);
    return Generator(ck.spec, dummy);
}()) {
    restore(ck, gen_, nullptr);
}

Image InferenceModel::run(const Image& img) {
    Image prepared = resize_and_pad(img, size_, size_);
    Tensor x = images_to_tensor({&prepared});
    Tensor y = gen_.forward(x, Mode::eval);
    return tensor_item_to_image(y, 0);
}

Image infer(const Checkpoint& ck, const Image& img) {
    InferenceModel model(ck);
    return model.run(img);
}

}  // namespace desmoke
