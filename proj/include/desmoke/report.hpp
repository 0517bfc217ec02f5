#pragma once

#include "desmoke/eval.hpp"

namespace desmoke {

// Writes report.csv (method, <metric>_mean, <metric>_std, ...) and a
// static report.html with input/output/ground-truth strips. The HTML
// references only files inside out_dir.
void render_report(const EvalOutput& eval, const std::string& out_dir);

std::string report_csv(const EvalOutput& eval);

}  // namespace desmoke
