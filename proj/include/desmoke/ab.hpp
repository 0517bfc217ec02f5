#pragma once

#include "desmoke/train.hpp"

namespace desmoke {

struct AbArm {
    std::string name;
    LossWeights weights;
    TrainResult training;
    double mean_grid_score = 0.0;
    double mean_ssim = 0.0;
    double mean_epoch_seconds = 0.0;
};

struct AbRecord {
    AbArm without_ssim;   // ssim_variant = none
    AbArm with_ms_ssim;   // ssim_variant = ms_ssim
    double epoch_overhead_percent = 0.0;  // ms-ssim arm vs. plain arm
    std::string record_path;
};

// The headline experiment: trains two identically seeded models whose
// configurations differ only in ssim_variant (none vs. ms_ssim),
// evaluates grid-artifact score and SSIM on the held-out pairs, writes
// spectra of sample outputs from both arms plus ab_record.json.
AbRecord ab_experiment(const DatasetManifest& train_split, const DatasetManifest& heldout,
                       const NetworkSpec& spec, const LossWeights& base,
                       const TrainConfig& config, const std::string& out_dir);

}  // namespace desmoke
