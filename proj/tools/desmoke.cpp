#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "desmoke/ab.hpp"
#include "desmoke/config.hpp"
#include "desmoke/dataset.hpp"
#include "desmoke/dcp.hpp"
#include "desmoke/eval.hpp"
#include "desmoke/image_io.hpp"
#include "desmoke/report.hpp"
#include "desmoke/spectrum.hpp"
#include "desmoke/train.hpp"
#include "desmoke/veil.hpp"

namespace fs = std::filesystem;
using namespace desmoke;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 0;
    std::string config_path;
    int threads = 1;

    ConfigMap config() const {
        return config_path.empty() ? ConfigMap() : ConfigMap::from_file(config_path);
    }
};

int cmd_synth(const GlobalOpts& g, const std::string& clean_dir, const std::string& out_dir) {
    SmokeParams base;
    ConfigMap cfg = g.config();
    base.perlin_octaves = cfg.get("perlin_octaves", base.perlin_octaves);
    base.base_frequency = cfg.get("base_frequency", base.base_frequency);
    base.persistence = cfg.get("persistence", base.persistence);
    DatasetManifest m = build_dataset(clean_dir, out_dir, base, g.seed);
    std::printf("wrote %zu pairs under %s\n", m.entries.size(), out_dir.c_str());
    return 0;
}

int cmd_train(const GlobalOpts& g, const std::string& data_path, const std::string& val_path,
              const std::string& out_dir) {
    TrainConfig tc;
    NetworkSpec spec;
    LossWeights weights;
    tc.seed = g.seed;
    apply_config(g.config(), &tc, &spec, &weights);

    DatasetManifest data = load_manifest(data_path);
    DatasetManifest val;
    const DatasetManifest* val_ptr = nullptr;
    if (!val_path.empty()) {
        val = load_manifest(val_path);
        val_ptr = &val;
    }
    TrainResult r = train(data, val_ptr, spec, weights, tc, out_dir);
    std::printf("checkpoint: %s\nlog: %s\n", r.checkpoint_path.c_str(), r.log_path.c_str());
    return 0;
}

int cmd_run(const GlobalOpts& g, const std::string& method, const std::string& in_dir,
            const std::string& out_dir, const std::string& params_path) {
    ConfigMap params = params_path.empty() ? g.config() : ConfigMap::from_file(params_path);
    DcpParams dcp;
    dcp.patch_size = params.get("patch_size", dcp.patch_size);
    dcp.omega = params.get("omega", dcp.omega);
    dcp.t_floor = params.get("t_floor", dcp.t_floor);
    dcp.airlight_fraction = params.get("airlight_fraction", dcp.airlight_fraction);
    dcp.guided_radius = params.get("guided_radius", dcp.guided_radius);
    dcp.guided_eps = params.get("guided_eps", dcp.guided_eps);
    const double strength = params.get("strength", 0.8);

    require(method == "dcp" || method == "veil", ErrorKind::argument,
            "run method must be dcp or veil");
    require(fs::is_directory(in_dir), ErrorKind::argument, "not a directory: " + in_dir);
    fs::create_directories(out_dir);

    std::vector<fs::path> files;
    for (const auto& ent : fs::directory_iterator(in_dir)) {
        auto ext = ent.path().extension().string();
        if (ent.is_regular_file() && (ext == ".png" || ext == ".ppm")) files.push_back(ent.path());
    }
    std::sort(files.begin(), files.end());
    require(!files.empty(), ErrorKind::argument, "no images in " + in_dir);

    for (const auto& f : files) {
        Image img = load_image(f.string());
        Image out = method == "dcp" ? dehaze_dcp(img, dcp) : remove_veil(img, strength);
        save_image(out, (fs::path(out_dir) / f.filename()).string());
    }
    std::printf("processed %zu images into %s\n", files.size(), out_dir.c_str());
    return 0;
}

int cmd_eval(const GlobalOpts& g, const std::string& data_path, const std::string& out_dir,
             const std::vector<std::string>& methods, const std::vector<std::string>& metrics) {
    EvalConfig cfg;
    cfg.threads = g.threads;
    for (const auto& m : methods) cfg.methods.push_back(EvalMethod::parse(m));
    if (!metrics.empty()) cfg.metrics = metrics;

    DatasetManifest data = load_manifest(data_path);
    EvalOutput out = evaluate(data, cfg, out_dir);
    render_report(out, out_dir);
    std::printf("%s", report_csv(out).c_str());
    return 0;
}

int cmd_ab(const GlobalOpts& g, const std::string& data_path, const std::string& heldout_path,
           const std::string& out_dir) {
    TrainConfig tc;
    NetworkSpec spec;
    LossWeights weights;
    tc.seed = g.seed;
    apply_config(g.config(), &tc, &spec, &weights);

    DatasetManifest data = load_manifest(data_path);
    DatasetManifest heldout = load_manifest(heldout_path);
    AbRecord rec = ab_experiment(data, heldout, spec, weights, tc, out_dir);
    std::printf("grid score: no_ssim %.6f vs ms_ssim %.6f\n", rec.without_ssim.mean_grid_score,
                rec.with_ms_ssim.mean_grid_score);
    std::printf("ssim:       no_ssim %.6f vs ms_ssim %.6f\n", rec.without_ssim.mean_ssim,
                rec.with_ms_ssim.mean_ssim);
    std::printf("ms-ssim epoch overhead: %.1f%%\n", rec.epoch_overhead_percent);
    std::printf("record: %s\n", rec.record_path.c_str());
    return 0;
}

int cmd_spectrum(const std::string& in_path, const std::string& out_spectrum,
                 const std::string& report_path, double prominence) {
    Image img = load_image(in_path);
    Spectrum spec = fft_magnitude(img);
    if (!out_spectrum.empty()) save_image(spectrum_to_image(spec), out_spectrum);

    auto peaks = detect_periodic_peaks(spec, prominence);
    const double score = grid_artifact_score(img);

    std::ostringstream rep;
    rep << "image: " << in_path << "\n";
    rep << "grid_artifact_score: " << score << "\n";
    rep << "peaks (u v magnitude), prominence " << prominence << ":\n";
    for (const auto& p : peaks) {
        rep << p.u << " " << p.v << " " << p.magnitude << "\n";
    }
    if (report_path.empty()) {
        std::printf("%s", rep.str().c_str());
    } else {
        std::FILE* f = std::fopen(report_path.c_str(), "wb");
        require(f != nullptr, ErrorKind::io, "cannot write " + report_path);
        std::fwrite(rep.str().data(), 1, rep.str().size(), f);
        std::fclose(f);
    }
    return 0;
}

// Rebuilds report.html from an existing eval directory (report.csv plus
// images/).
int cmd_report(const std::string& eval_dir, const std::string& out_dir) {
    const std::string csv_path = (fs::path(eval_dir) / "report.csv").string();
    std::FILE* f = std::fopen(csv_path.c_str(), "rb");
    require(f != nullptr, ErrorKind::io, "cannot open " + csv_path);
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
    std::fclose(f);

    EvalOutput out;
    std::stringstream ss(text);
    std::string line;
    require(static_cast<bool>(std::getline(ss, line)), ErrorKind::format, "empty report.csv");
    {
        std::stringstream hs(line);
        std::string col;
        std::getline(hs, col, ',');  // "method"
        while (std::getline(hs, col, ',')) {
            if (col.size() > 5 && col.compare(col.size() - 5, 5, "_mean") == 0) {
                out.metric_names.push_back(col.substr(0, col.size() - 5));
            }
        }
    }
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream rs(line);
        ReportRow row;
        std::string cell;
        std::getline(rs, row.method, ',');
        while (std::getline(rs, cell, ',')) {
            MetricResult m;
            m.mean = std::strtod(cell.c_str(), nullptr);
            if (std::getline(rs, cell, ',')) m.std_dev = std::strtod(cell.c_str(), nullptr);
            row.metrics.push_back(std::move(m));
        }
        out.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < out.rows.size() && i < out.metric_names.size(); ++i) {
        out.rows[i].metrics.resize(out.metric_names.size());
    }

    // pick up existing strip images
    for (std::size_t i = 0;; ++i) {
        const std::string stem = "pair" + std::to_string(i);
        fs::path input = fs::path(eval_dir) / "images" / (stem + "_input.png");
        if (!fs::exists(input)) break;
        EvalOutput::Strip s;
        s.input = "images/" + stem + "_input.png";
        s.truth = "images/" + stem + "_truth.png";
        for (const auto& row : out.rows) {
            std::string name = row.method;
            for (char& c : name) {
                if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '_';
            }
            s.outputs.push_back("images/" + stem + "_" + name + ".png");
        }
        out.strips.push_back(std::move(s));
    }

    render_report(out, out_dir.empty() ? eval_dir : out_dir);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surgical smoke removal toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed, "global RNG seed");
    app.add_option("--config", g.config_path, "key = value config file");
    app.add_option("--threads", g.threads, "worker threads for evaluation");

    std::string clean_dir, out_dir, data_path, val_path, heldout_path, method, in_dir;
    std::string params_path, in_path, out_spectrum, report_path, eval_dir;
    std::vector<std::string> methods, metrics;
    double prominence = 10.0;

    auto* synth = app.add_subcommand("synth", "generate a paired smoke dataset");
    synth->add_option("--clean", clean_dir, "directory of clean images")->required();
    synth->add_option("--out", out_dir, "output directory")->required();

    auto* train_cmd = app.add_subcommand("train", "train the desmoking generator");
    train_cmd->add_option("--data", data_path, "training manifest")->required();
    train_cmd->add_option("--val", val_path, "validation manifest");
    train_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* run = app.add_subcommand("run", "apply a classical method to a directory");
    run->add_option("--method", method, "dcp or veil")->required();
    run->add_option("--in", in_dir, "input directory")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--params", params_path, "parameter file");

    auto* eval_cmd = app.add_subcommand("eval", "evaluate methods on a test manifest");
    eval_cmd->add_option("--data", data_path, "test manifest")->required();
    eval_cmd->add_option("--out", out_dir, "output directory")->required();
    eval_cmd->add_option("--methods", methods, "identity,dcp,veil,model:CKPT")
        ->required()
        ->delimiter(',');
    eval_cmd->add_option("--metrics", metrics, "subset of the metric set")->delimiter(',');

    auto* ab = app.add_subcommand("ab", "with/without MS-SSIM loss experiment");
    ab->add_option("--data", data_path, "training manifest")->required();
    ab->add_option("--heldout", heldout_path, "held-out manifest")->required();
    ab->add_option("--out", out_dir, "output directory")->required();

    auto* spectrum = app.add_subcommand("spectrum", "Fourier magnitude analysis of an image");
    spectrum->add_option("--in", in_path, "input image")->required();
    spectrum->add_option("--out-spectrum", out_spectrum, "log-magnitude image path");
    spectrum->add_option("--report", report_path, "peak/score report path");
    spectrum->add_option("--prominence", prominence, "peak detection threshold");

    auto* report = app.add_subcommand("report", "rebuild report.html from an eval directory");
    report->add_option("--eval-dir", eval_dir, "directory produced by eval")->required();
    report->add_option("--out", out_dir, "output directory (default: eval dir)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(g, clean_dir, out_dir);
        if (train_cmd->parsed()) return cmd_train(g, data_path, val_path, out_dir);
        if (run->parsed()) return cmd_run(g, method, in_dir, out_dir, params_path);
        if (eval_cmd->parsed()) return cmd_eval(g, data_path, out_dir, methods, metrics);
        if (ab->parsed()) return cmd_ab(g, data_path, heldout_path, out_dir);
        if (spectrum->parsed()) return cmd_spectrum(in_path, out_spectrum, report_path, prominence);
        if (report->parsed()) return cmd_report(eval_dir, out_dir);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
