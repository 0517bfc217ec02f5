#include "desmoke/guided_filter.hpp"

#include <algorithm>

#include "desmoke/common.hpp"

namespace desmoke {

namespace {

// Integral image with a zero top row and left column.
std::vector<double> integral(const std::vector<double>& src, int w, int h) {
    std::vector<double> s(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    for (int y = 0; y < h; ++y) {
        double row = 0.0;
        for (int x = 0; x < w; ++x) {
            row += src[static_cast<std::size_t>(y) * w + x];
            s[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] =
                s[static_cast<std::size_t>(y) * (w + 1) + x + 1] + row;
        }
    }
    return s;
}

template <typename Op>
std::vector<double> extremum_filter(const std::vector<double>& src, int w, int h, int window,
                                    Op op, double init) {
    require(window >= 1 && window % 2 == 1, ErrorKind::argument, "window must be odd");
    const int r = window / 2;
    std::vector<double> tmp(src.size()), out(src.size());
    // horizontal
    for (int y = 0; y < h; ++y) {
        const double* row = src.data() + static_cast<std::size_t>(y) * w;
        double* dst = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - r);
            const int x1 = std::min(w - 1, x + r);
            double v = init;
            for (int i = x0; i <= x1; ++i) v = op(v, row[i]);
            dst[x] = v;
        }
    }
    // vertical
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            const int y0 = std::max(0, y - r);
            const int y1 = std::min(h - 1, y + r);
            double v = init;
            for (int i = y0; i <= y1; ++i) v = op(v, tmp[static_cast<std::size_t>(i) * w + x]);
            out[static_cast<std::size_t>(y) * w + x] = v;
        }
    }
    return out;
}

}  // namespace

std::vector<double> box_mean(const std::vector<double>& src, int w, int h, int radius) {
    require(radius >= 0, ErrorKind::argument, "radius must be non-negative");
    std::vector<double> s = integral(src, w, h);
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            const double total = s[static_cast<std::size_t>(y1 + 1) * (w + 1) + x1 + 1] -
                                 s[static_cast<std::size_t>(y0) * (w + 1) + x1 + 1] -
                                 s[static_cast<std::size_t>(y1 + 1) * (w + 1) + x0] +
                                 s[static_cast<std::size_t>(y0) * (w + 1) + x0];
            const double area = static_cast<double>(y1 - y0 + 1) * (x1 - x0 + 1);
            out[static_cast<std::size_t>(y) * w + x] = total / area;
        }
    }
    return out;
}

std::vector<double> guided_filter(const std::vector<double>& guide,
                                  const std::vector<double>& input, int w, int h, int radius,
                                  double eps) {
    require(guide.size() == input.size() &&
                guide.size() == static_cast<std::size_t>(w) * h,
            ErrorKind::shape, "guided_filter: size mismatch");
    const std::size_t n = guide.size();

    std::vector<double> gg(n), gp(n);
    for (std::size_t i = 0; i < n; ++i) {
        gg[i] = guide[i] * guide[i];
        gp[i] = guide[i] * input[i];
    }
    std::vector<double> mean_g = box_mean(guide, w, h, radius);
    std::vector<double> mean_p = box_mean(input, w, h, radius);
    std::vector<double> corr_gg = box_mean(gg, w, h, radius);
    std::vector<double> corr_gp = box_mean(gp, w, h, radius);

    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double var_g = corr_gg[i] - mean_g[i] * mean_g[i];
        const double cov_gp = corr_gp[i] - mean_g[i] * mean_p[i];
        a[i] = cov_gp / (var_g + eps);
        b[i] = mean_p[i] - a[i] * mean_g[i];
    }
    std::vector<double> mean_a = box_mean(a, w, h, radius);
    std::vector<double> mean_b = box_mean(b, w, h, radius);

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = mean_a[i] * guide[i] + mean_b[i];
    return out;
}

std::vector<double> min_filter(const std::vector<double>& src, int w, int h, int window) {
    return extremum_filter(
        src, w, h, window, [](double a, double b) { return std::min(a, b); }, 1e300);
}

std::vector<double> max_filter(const std::vector<double>& src, int w, int h, int window) {
    return extremum_filter(
        src, w, h, window, [](double a, double b) { return std::max(a, b); }, -1e300);
}

}  // namespace desmoke
