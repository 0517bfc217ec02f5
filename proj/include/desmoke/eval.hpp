#pragma once

#include "desmoke/dataset.hpp"
#include "desmoke/dcp.hpp"
#include "desmoke/metrics.hpp"

namespace desmoke {

struct EvalMethod {
    enum class Kind { identity, dcp, veil, model };
    Kind kind = Kind::identity;
    std::string checkpoint;  // model methods only
    std::string display;

    // "identity" | "dcp" | "veil" | "model:<checkpoint path>"
    static EvalMethod parse(const std::string& text);
};

extern const std::vector<std::string> kAllMetrics;  // ciede2000 rmse psnr ssim ms_ssim grid_score

struct EvalConfig {
    std::vector<EvalMethod> methods;
    std::vector<std::string> metrics = kAllMetrics;
    bool exclude_padding = true;  // drop resize_and_pad borders from metrics
    int threads = 1;
    double veil_strength = 0.8;
    DcpParams dcp;
    int max_strips = 12;  // pairs dumped as images for the HTML report
};

struct ReportRow {
    std::string method;
    std::vector<MetricResult> metrics;       // aligned with EvalConfig::metrics
    std::vector<std::string> notes;          // per-pair metric failures
};

struct EvalOutput {
    std::vector<ReportRow> rows;
    struct Strip {
        std::string input;  // paths relative to the eval out_dir
        std::vector<std::string> outputs;
        std::string truth;
    };
    std::vector<Strip> strips;
    std::vector<std::string> metric_names;
};

// Desmokes every pair with every method and aggregates the requested
// metrics against the clean ground truth (identity = the unprocessed
// smoky image; RMSE is reported on the 0-255 scale). When out_dir is
// non-empty, per-method outputs and strip images are written there.
EvalOutput evaluate(const DatasetManifest& testset, const EvalConfig& config,
                    const std::string& out_dir = "");

}  // namespace desmoke
