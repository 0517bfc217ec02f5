#pragma once

#include <string>
#include <vector>

#include "desmoke/smoke.hpp"

namespace desmoke {

enum class Split { all, train, val, test };

struct ManifestEntry {
    std::string clean_path;
    std::string smoke_path;
    Density density = Density::medium;
    std::uint64_t seed = 0;
    std::array<double, 3> airlight = {0.0, 0.0, 0.0};
};

// One manifest file per split; `split` records which file this came from.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    Split split = Split::all;
    std::string root;
};

// Composites every clean image in clean_dir with Perlin smoke at the
// three densities and writes the paired images plus manifest files
// (manifest.txt and per-split manifest_{train,val,test}.txt, split by
// clean image at 80/10/10) into out_dir. Fully deterministic per seed.
// Noise parameters are taken from `base`; density, per-pair seed and
// airlight are derived internally.
DatasetManifest build_dataset(const std::string& clean_dir, const std::string& out_dir,
                              const SmokeParams& base, std::uint64_t seed);

DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

}  // namespace desmoke
