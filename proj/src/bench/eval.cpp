#include "desmoke/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <thread>

#include "desmoke/ciede2000.hpp"
#include "desmoke/color.hpp"
#include "desmoke/image_io.hpp"
#include "desmoke/resize.hpp"
#include "desmoke/spectrum.hpp"
#include "desmoke/ssim.hpp"
#include "desmoke/train.hpp"
#include "desmoke/veil.hpp"

namespace fs = std::filesystem;

namespace desmoke {

const std::vector<std::string> kAllMetrics = {"ciede2000", "rmse",    "psnr",
                                              "ssim",      "ms_ssim", "grid_score"};

EvalMethod EvalMethod::parse(const std::string& text) {
    EvalMethod m;
    if (text == "identity") {
        m.kind = Kind::identity;
        m.display = "identity";
    } else if (text == "dcp") {
        m.kind = Kind::dcp;
        m.display = "dcp";
    } else if (text == "veil") {
        m.kind = Kind::veil;
        m.display = "veil";
    } else if (text.rfind("model:", 0) == 0) {
        m.kind = Kind::model;
        m.checkpoint = text.substr(6);
        require(!m.checkpoint.empty(), ErrorKind::argument, "model method needs a checkpoint");
        m.display = "model:" + fs::path(m.checkpoint).parent_path().filename().string();
        if (m.display == "model:") m.display = "model";
    } else {
        fail(ErrorKind::argument, "unknown method: " + text);
    }
    return m;
}

namespace {

double metric_value(const std::string& name, const Image& ref, const Image& out) {
    if (name == "ciede2000") return ciede2000(rgb_to_lab(ref), rgb_to_lab(out)).mean;
    if (name == "rmse") return 255.0 * rmse(ref, out);  // Table-1 scale
    if (name == "psnr") return psnr(ref, out);
    if (name == "ssim") return ssim(ref, out);
    if (name == "ms_ssim") return ms_ssim(ref, out, MsSsimParams::for_size(ref.width, ref.height));
    if (name == "grid_score") return grid_artifact_score(out);
    fail(ErrorKind::argument, "unknown metric: " + name);
}

struct PairResult {
    std::vector<double> values;  // one per metric, NaN on failure
    std::vector<std::string> notes;
};

std::string fs_safe(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '_';
    }
    return out;
}

}  // namespace

EvalOutput evaluate(const DatasetManifest& testset, const EvalConfig& config,
                    const std::string& out_dir) {
    require(!config.methods.empty() && !config.metrics.empty(), ErrorKind::argument,
            "evaluate: need at least one method and one metric");
    require(!testset.entries.empty(), ErrorKind::argument, "evaluate: empty test set");

    const std::size_t n = testset.entries.size();
    const bool dump = !out_dir.empty();
    if (dump) fs::create_directories(fs::path(out_dir) / "images");

    EvalOutput result;
    result.metric_names = config.metrics;
    const std::size_t n_strips = dump ? std::min<std::size_t>(config.max_strips, n) : 0;
    result.strips.resize(n_strips);

    for (const auto& method : config.methods) {
        ReportRow row;
        row.method = method.display.empty() ? "method" : method.display;

        std::vector<PairResult> per_pair(n);
        const int threads = std::max(1, config.threads);

        auto worker = [&](int tid) {
            // one model instance per thread; layer caches are stateful
            std::unique_ptr<InferenceModel> model;
            if (method.kind == EvalMethod::Kind::model) {
                model = std::make_unique<InferenceModel>(load_checkpoint(method.checkpoint));
            }
            for (std::size_t i = tid; i < n; i += static_cast<std::size_t>(threads)) {
                const auto& entry = testset.entries[i];
                PairResult& pr = per_pair[i];
                pr.values.assign(config.metrics.size(),
                                 std::numeric_limits<double>::quiet_NaN());
                Image clean, smoky, ref, out;
                try {
                    clean = load_image(entry.clean_path);
                    smoky = load_image(entry.smoke_path);
                } catch (const Error& e) {
                    throw Error(ErrorKind::io, std::string(e.what()) + " (pair " +
                                                   std::to_string(i) + ")");
                }

                switch (method.kind) {
                    case EvalMethod::Kind::identity:
                        ref = clean;
                        out = smoky;
                        break;
                    case EvalMethod::Kind::dcp:
                        ref = clean;
                        out = dehaze_dcp(smoky, config.dcp);
                        break;
                    case EvalMethod::Kind::veil:
                        ref = clean;
                        out = remove_veil(smoky, config.veil_strength);
                        break;
                    case EvalMethod::Kind::model: {
                        const int s = model->image_size();
                        ref = resize_and_pad(clean, s, s);
                        out = model->run(smoky);
                        if (config.exclude_padding) {
                            FitRect r = fit_rect(clean.width, clean.height, s, s);
                            ref = crop(ref, r);
                            out = crop(out, r);
                        }
                        break;
                    }
                }

                for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
                    try {
                        pr.values[mi] = metric_value(config.metrics[mi], ref, out);
                    } catch (const Error& e) {
                        pr.notes.push_back(config.metrics[mi] + " failed on pair " +
                                           std::to_string(i) + ": " + e.what());
                    }
                }

                if (dump && i < n_strips) {
                    const std::string stem = "pair" + std::to_string(i);
                    const std::string out_rel =
                        "images/" + stem + "_" + fs_safe(row.method) + ".png";
                    save_image(out, (fs::path(out_dir) / out_rel).string());
                    // input/truth written once, keyed off the first method
                    if (&method == &config.methods.front()) {
                        save_image(smoky,
                                   (fs::path(out_dir) / ("images/" + stem + "_input.png")).string());
                        save_image(clean,
                                   (fs::path(out_dir) / ("images/" + stem + "_truth.png")).string());
                    }
                }
            }
        };

        if (threads == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
            for (auto& t : pool) t.join();
        }

        // aggregate in manifest order, skipping failed pairs
        for (std::size_t mi = 0; mi < config.metrics.size(); ++mi) {
            std::vector<double> values;
            values.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                if (std::isfinite(per_pair[i].values[mi]) ||
                    std::isinf(per_pair[i].values[mi])) {
                    values.push_back(per_pair[i].values[mi]);
                }
            }
            if (values.empty()) {
                MetricResult r;
                r.name = config.metrics[mi];
                r.mean = r.std_dev = std::numeric_limits<double>::quiet_NaN();
                row.metrics.push_back(std::move(r));
            } else {
                row.metrics.push_back(aggregate(values, config.metrics[mi]));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& note : per_pair[i].notes) row.notes.push_back(std::move(note));
        }
        result.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < n_strips; ++i) {
        EvalOutput::Strip& s = result.strips[i];
        const std::string stem = "pair" + std::to_string(i);
        s.input = "images/" + stem + "_input.png";
        s.truth = "images/" + stem + "_truth.png";
        for (const auto& row : result.rows) {
            s.outputs.push_back("images/" + stem + "_" + fs_safe(row.method) + ".png");
        }
    }
    return result;
}

}  // namespace desmoke
