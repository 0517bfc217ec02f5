#include "desmoke/resize.hpp"

#include <algorithm>
#include <cmath>

namespace desmoke {

FitRect fit_rect(int src_w, int src_h, int target_w, int target_h) {
    require(target_w > 0 && target_h > 0, ErrorKind::argument, "target dims must be positive");
    const double sx = static_cast<double>(target_w) / src_w;
    const double sy = static_cast<double>(target_h) / src_h;
    FitRect r;
    if (sx <= sy) {
        r.width = target_w;
        r.height = std::clamp(static_cast<int>(std::lround(src_h * sx)), 1, target_h);
    } else {
        r.height = target_h;
        r.width = std::clamp(static_cast<int>(std::lround(src_w * sy)), 1, target_w);
    }
    r.x = (target_w - r.width) / 2;
    r.y = (target_h - r.height) / 2;
    return r;
}

Image resize_bilinear(const Image& img, int new_w, int new_h) {
    require(new_w > 0 && new_h > 0, ErrorKind::argument, "target dims must be positive");
    if (new_w == img.width && new_h == img.height) return img;

    Image out(new_w, new_h, img.channels);
    const double rx = static_cast<double>(img.width) / new_w;
    const double ry = static_cast<double>(img.height) / new_h;
    for (int c = 0; c < img.channels; ++c) {
        const double* src = img.plane(c);
        double* dst = out.plane(c);
        for (int y = 0; y < new_h; ++y) {
            double sy = (y + 0.5) * ry - 0.5;
            int y0 = static_cast<int>(std::floor(sy));
            double fy = sy - y0;
            int y0c = std::clamp(y0, 0, img.height - 1);
            int y1c = std::clamp(y0 + 1, 0, img.height - 1);
            for (int x = 0; x < new_w; ++x) {
                double sx = (x + 0.5) * rx - 0.5;
                int x0 = static_cast<int>(std::floor(sx));
                double fx = sx - x0;
                int x0c = std::clamp(x0, 0, img.width - 1);
                int x1c = std::clamp(x0 + 1, 0, img.width - 1);
                double top = src[static_cast<std::size_t>(y0c) * img.width + x0c] * (1.0 - fx) +
                             src[static_cast<std::size_t>(y0c) * img.width + x1c] * fx;
                double bot = src[static_cast<std::size_t>(y1c) * img.width + x0c] * (1.0 - fx) +
                             src[static_cast<std::size_t>(y1c) * img.width + x1c] * fx;
                dst[static_cast<std::size_t>(y) * new_w + x] = top * (1.0 - fy) + bot * fy;
            }
        }
    }
    out.clamp01();
    return out;
}

Image resize_and_pad(const Image& img, int target_w, int target_h) {
    FitRect r = fit_rect(img.width, img.height, target_w, target_h);
    Image resized = resize_bilinear(img, r.width, r.height);
    if (r.width == target_w && r.height == target_h) return resized;

    Image out(target_w, target_h, img.channels, 0.0);
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < r.height; ++y) {
            const double* src = resized.plane(c) + static_cast<std::size_t>(y) * r.width;
            double* dst = out.plane(c) + static_cast<std::size_t>(y + r.y) * target_w + r.x;
            std::copy(src, src + r.width, dst);
        }
    }
    return out;
}

Image crop(const Image& img, const FitRect& rect) {
    require(rect.x >= 0 && rect.y >= 0 && rect.x + rect.width <= img.width &&
                rect.y + rect.height <= img.height,
            ErrorKind::argument, "crop rect out of bounds");
    Image out(rect.width, rect.height, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        for (int y = 0; y < rect.height; ++y) {
            const double* src =
                img.plane(c) + static_cast<std::size_t>(y + rect.y) * img.width + rect.x;
            std::copy(src, src + rect.width, out.plane(c) + static_cast<std::size_t>(y) * rect.width);
        }
    }
    return out;
}

}  // namespace desmoke
