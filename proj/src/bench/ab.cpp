#include "desmoke/ab.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "desmoke/image_io.hpp"
#include "desmoke/resize.hpp"
#include "desmoke/spectrum.hpp"

namespace fs = std::filesystem;

namespace desmoke {

namespace {

nlohmann::json weights_json(const LossWeights& w) {
    return {{"lambda_adv", w.lambda_adv},   {"lambda_perc", w.lambda_perc},
            {"lambda_ssim", w.lambda_ssim}, {"lambda_l1", w.lambda_l1},
            {"ssim_variant", ssim_variant_name(w.ssim_variant)}};
}

void eval_arm(AbArm& arm, const DatasetManifest& heldout, const TrainConfig& config,
              const std::string& out_dir, int spectra_count) {
    Checkpoint ck = load_checkpoint(arm.training.checkpoint_path);
    InferenceModel model(ck);

    double grid_total = 0.0;
    double ssim_total = 0.0;
    int count = 0;
    for (const auto& entry : heldout.entries) {
        Image clean = load_image(entry.clean_path);
        Image smoky = load_image(entry.smoke_path);
        Image ref = resize_and_pad(clean, config.image_size, config.image_size);
        Image out = model.run(smoky);

        grid_total += grid_artifact_score(out);
        ssim_total += ssim(ref, out);

        if (count < spectra_count) {
            Spectrum spec = fft_magnitude(out);
            save_image(spectrum_to_image(spec),
                       (fs::path(out_dir) /
                        ("spectrum_" + arm.name + "_" + std::to_string(count) + ".png"))
                           .string());
            save_image(out, (fs::path(out_dir) /
                             ("output_" + arm.name + "_" + std::to_string(count) + ".png"))
                                .string());
        }
        ++count;
    }
    arm.mean_grid_score = grid_total / count;
    arm.mean_ssim = ssim_total / count;

    double seconds = 0.0;
    for (const auto& e : arm.training.epochs) seconds += e.seconds;
    arm.mean_epoch_seconds = seconds / arm.training.epochs.size();
}

}  // namespace

AbRecord ab_experiment(const DatasetManifest& train_split, const DatasetManifest& heldout,
                       const NetworkSpec& spec, const LossWeights& base,
                       const TrainConfig& config, const std::string& out_dir) {
    require(!heldout.entries.empty(), ErrorKind::argument, "ab_experiment: empty held-out set");
    fs::create_directories(out_dir);

    AbRecord rec;
    rec.without_ssim.name = "no_ssim";
    rec.without_ssim.weights = base;
    rec.without_ssim.weights.ssim_variant = SsimVariant::none;

    rec.with_ms_ssim.name = "ms_ssim";
    rec.with_ms_ssim.weights = base;
    rec.with_ms_ssim.weights.ssim_variant = SsimVariant::ms_ssim;

    rec.without_ssim.training =
        train(train_split, &heldout, spec, rec.without_ssim.weights, config,
              (fs::path(out_dir) / "arm_no_ssim").string());
    rec.with_ms_ssim.training =
        train(train_split, &heldout, spec, rec.with_ms_ssim.weights, config,
              (fs::path(out_dir) / "arm_ms_ssim").string());

    const int spectra_count = 4;
    eval_arm(rec.without_ssim, heldout, config, out_dir, spectra_count);
    eval_arm(rec.with_ms_ssim, heldout, config, out_dir, spectra_count);

    rec.epoch_overhead_percent = 100.0 *
                                 (rec.with_ms_ssim.mean_epoch_seconds -
                                  rec.without_ssim.mean_epoch_seconds) /
                                 rec.without_ssim.mean_epoch_seconds;

    nlohmann::json j;
    for (const AbArm* arm : {&rec.without_ssim, &rec.with_ms_ssim}) {
        j["arms"].push_back({{"name", arm->name},
                             {"weights", weights_json(arm->weights)},
                             {"seed", config.seed},
                             {"epochs", config.epochs},
                             {"batch_size", config.batch_size},
                             {"image_size", config.image_size},
                             {"mean_grid_score", arm->mean_grid_score},
                             {"mean_ssim", arm->mean_ssim},
                             {"mean_epoch_seconds", arm->mean_epoch_seconds},
                             {"checkpoint", arm->training.checkpoint_path}});
    }
    j["epoch_overhead_percent"] = rec.epoch_overhead_percent;
    j["heldout_pairs"] = heldout.entries.size();

    rec.record_path = (fs::path(out_dir) / "ab_record.json").string();
    std::FILE* f = std::fopen(rec.record_path.c_str(), "wb");
    require(f != nullptr, ErrorKind::io, "cannot write " + rec.record_path);
    const std::string text = j.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    return rec;
}

}  // namespace desmoke
