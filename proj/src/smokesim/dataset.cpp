#include "desmoke/dataset.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "desmoke/image_io.hpp"

namespace fs = std::filesystem;

namespace desmoke {

namespace {

bool is_image_file(const fs::path& p) {
    auto ext = p.extension().string();
    return ext == ".png" || ext == ".ppm";
}

std::string format_entry(const ManifestEntry& e) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, "%s\t%s\t%s\t%" PRIu64 "\t%.17g\t%.17g\t%.17g",
                  e.clean_path.c_str(), e.smoke_path.c_str(), density_name(e.density), e.seed,
                  e.airlight[0], e.airlight[1], e.airlight[2]);
    return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find('\t', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

void write_manifest_file(const std::vector<ManifestEntry>& entries, const fs::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    require(f != nullptr, ErrorKind::io, "cannot write " + path.string());
    for (const auto& e : entries) {
        std::string line = format_entry(e);
        std::fprintf(f, "%s\n", line.c_str());
    }
    std::fclose(f);
}

}  // namespace

DatasetManifest build_dataset(const std::string& clean_dir, const std::string& out_dir,
                              const SmokeParams& base, std::uint64_t seed) {
    std::vector<fs::path> cleans;
    require(fs::is_directory(clean_dir), ErrorKind::argument,
            "clean directory does not exist: " + clean_dir);
    for (const auto& ent : fs::directory_iterator(clean_dir)) {
        if (ent.is_regular_file() && is_image_file(ent.path())) cleans.push_back(ent.path());
    }
    require(!cleans.empty(), ErrorKind::argument, "no images in " + clean_dir);
    std::sort(cleans.begin(), cleans.end());

    fs::create_directories(fs::path(out_dir) / "smoke");

    constexpr Density kDensities[3] = {Density::light, Density::medium, Density::heavy};
    DatasetManifest manifest;
    manifest.root = out_dir;
    std::set<std::string> used_names;

    for (std::size_t i = 0; i < cleans.size(); ++i) {
        Image clean = load_image(cleans[i].string());
        for (int d = 0; d < 3; ++d) {
            const std::uint64_t pair_seed = Rng::derive(seed, i * 3 + d + 1);
            Rng rng(pair_seed);
            const double a = rng.uniform(0.7, 1.0);

            SmokeParams params = base;
            params.density = kDensities[d];
            params.airlight = {a, a, a};
            params.seed = rng.next_u64();

            TransmissionMap noise = perlin_noise(clean.width, clean.height, params);
            TransmissionMap t = noise_to_transmission(noise, params.density);
            Image smoky = composite_smoke(clean, t, params.airlight);

            std::string name = cleans[i].stem().string() + "_" +
                               density_name(params.density) + ".png";
            require(used_names.insert(name).second, ErrorKind::argument,
                    "duplicate output name: " + name);
            fs::path smoke_path = fs::path(out_dir) / "smoke" / name;
            save_image(smoky, smoke_path.string());

            ManifestEntry e;
            e.clean_path = fs::absolute(cleans[i]).string();
            e.smoke_path = fs::absolute(smoke_path).string();
            e.density = params.density;
            e.seed = pair_seed;
            e.airlight = params.airlight;
            manifest.entries.push_back(std::move(e));
        }
    }

    // Split by clean image so all densities of a scene stay together.
    const std::size_t n = cleans.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng split_rng(Rng::derive(seed, 0xbeef));
    split_rng.shuffle(order);
    const std::size_t n_test = n >= 3 ? std::max<std::size_t>(1, std::lround(0.1 * n)) : 0;
    const std::size_t n_val = n >= 3 ? std::max<std::size_t>(1, std::lround(0.1 * n)) : 0;

    std::vector<ManifestEntry> train, val, test;
    for (std::size_t rank = 0; rank < n; ++rank) {
        const std::size_t img = order[rank];
        auto* bucket = rank < n_test ? &test : rank < n_test + n_val ? &val : &train;
        for (int d = 0; d < 3; ++d) bucket->push_back(manifest.entries[img * 3 + d]);
    }

    write_manifest_file(manifest.entries, fs::path(out_dir) / "manifest.txt");
    write_manifest_file(train, fs::path(out_dir) / "manifest_train.txt");
    write_manifest_file(val, fs::path(out_dir) / "manifest_val.txt");
    write_manifest_file(test, fs::path(out_dir) / "manifest_test.txt");
    return manifest;
}

DatasetManifest load_manifest(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    require(f != nullptr, ErrorKind::io, "cannot open manifest " + path);
    DatasetManifest m;
    m.root = fs::path(path).parent_path().string();
    const std::string fname = fs::path(path).filename().string();
    if (fname == "manifest_train.txt") m.split = Split::train;
    else if (fname == "manifest_val.txt") m.split = Split::val;
    else if (fname == "manifest_test.txt") m.split = Split::test;

    std::set<std::string> smoke_paths;
    std::string line;
    int ch;
    while ((ch = std::fgetc(f)) != EOF) {
        if (ch != '\n') {
            line.push_back(static_cast<char>(ch));
            continue;
        }
        if (!line.empty()) {
            auto cols = split_tabs(line);
            require(cols.size() == 7, ErrorKind::format, "malformed manifest line in " + path);
            ManifestEntry e;
            e.clean_path = cols[0];
            e.smoke_path = cols[1];
            e.density = density_from_name(cols[2]);
            e.seed = std::strtoull(cols[3].c_str(), nullptr, 10);
            for (int i = 0; i < 3; ++i) e.airlight[i] = std::strtod(cols[4 + i].c_str(), nullptr);
            require(smoke_paths.insert(e.smoke_path).second, ErrorKind::format,
                    "duplicate smoke path in manifest: " + e.smoke_path);
            m.entries.push_back(std::move(e));
        }
        line.clear();
    }
    std::fclose(f);
    require(!m.entries.empty(), ErrorKind::argument, "empty manifest: " + path);
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    write_manifest_file(manifest.entries, path);
}

}  // namespace desmoke
