#include "desmoke/report.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;

namespace desmoke {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    require(f != nullptr, ErrorKind::io, "cannot write " + path);
    const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size();
    std::fclose(f);
    require(ok, ErrorKind::io, "short write to " + path);
}

}  // namespace

std::string report_csv(const EvalOutput& eval) {
    std::ostringstream out;
    out << "method";
    for (const auto& m : eval.metric_names) out << "," << m << "_mean," << m << "_std";
    out << "\n";
    for (const auto& row : eval.rows) {
        out << row.method;
        for (const auto& m : row.metrics) out << "," << fmt(m.mean) << "," << fmt(m.std_dev);
        out << "\n";
    }
    return out.str();
}

void render_report(const EvalOutput& eval, const std::string& out_dir) {
    fs::create_directories(out_dir);
    write_file((fs::path(out_dir) / "report.csv").string(), report_csv(eval));

    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
         << "<title>desmoke report</title>\n"
         << "<style>\n"
         << "body { font-family: sans-serif; margin: 2em; }\n"
         << "table { border-collapse: collapse; }\n"
         << "td, th { border: 1px solid #999; padding: 4px 8px; text-align: right; }\n"
         << "th:first-child, td:first-child { text-align: left; }\n"
         << ".strip img { image-rendering: pixelated; width: 128px; margin: 2px; }\n"
         << ".strip { margin-bottom: 1em; }\n"
         << "</style>\n</head>\n<body>\n<h1>desmoke evaluation</h1>\n<table>\n<tr><th>method</th>";
    for (const auto& m : eval.metric_names) {
        html << "<th>" << m << " mean</th><th>" << m << " std</th>";
    }
    html << "</tr>\n";
    for (const auto& row : eval.rows) {
        html << "<tr><td>" << row.method << "</td>";
        for (const auto& m : row.metrics) {
            html << "<td>" << fmt(m.mean) << "</td><td>" << fmt(m.std_dev) << "</td>";
        }
        html << "</tr>\n";
    }
    html << "</table>\n";

    if (!eval.strips.empty()) {
        html << "<h2>side by side</h2>\n";
        html << "<p>input";
        for (const auto& row : eval.rows) html << " / " << row.method;
        html << " / ground truth</p>\n";
        for (const auto& strip : eval.strips) {
            html << "<div class=\"strip\">";
            html << "<img src=\"" << strip.input << "\" alt=\"input\">";
            for (const auto& out : strip.outputs) {
                html << "<img src=\"" << out << "\" alt=\"output\">";
            }
            html << "<img src=\"" << strip.truth << "\" alt=\"truth\">";
            html << "</div>\n";
        }
    }

    if (!eval.rows.empty()) {
        bool any_notes = false;
        for (const auto& row : eval.rows) any_notes = any_notes || !row.notes.empty();
        if (any_notes) {
            html << "<h2>notes</h2>\n<ul>\n";
            for (const auto& row : eval.rows) {
                for (const auto& note : row.notes) {
                    html << "<li>" << row.method << ": " << note << "</li>\n";
                }
            }
            html << "</ul>\n";
        }
    }
    html << "</body>\n</html>\n";
    write_file((fs::path(out_dir) / "report.html").string(), html.str());
}

}  // namespace desmoke
