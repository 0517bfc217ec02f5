#include "desmoke/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "desmoke/kernels.hpp"

namespace desmoke {

namespace {

// FFTW plan creation is not thread-safe; execution on local buffers is.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct PlanDeleter {
    void operator()(fftw_plan p) const {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(p);
    }
};

// Full complex 2-D DFT of a real signal, row-major, unnormalized.
std::vector<std::complex<double>> dft2(const std::vector<double>& src, int w, int h) {
    std::vector<std::complex<double>> in(src.size()), out(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) in[i] = src[i];
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_2d(h, w, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

std::vector<std::complex<double>> idft2(std::vector<std::complex<double>>& in, int w, int h) {
    std::vector<std::complex<double>> out(in.size());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_dft_2d(h, w, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

// Frequency index (0..n-1) for a centered offset.
inline int uncenter(int offset, int n) { return ((offset % n) + n + n / 2) % n; }

}  // namespace

double protect_radius(int w, int h) { return std::min(w, h) / 16.0; }

NotchMask NotchMask::all_pass(int w, int h) {
    NotchMask m;
    m.width = w;
    m.height = h;
    m.pass.assign(static_cast<std::size_t>(w) * h, 1);
    return m;
}

double NotchMask::protect_radius() const { return desmoke::protect_radius(width, height); }

void NotchMask::notch(int u, int v, double radius) {
    const int cx = width / 2;
    const int cy = height / 2;
    const double rp = protect_radius();
    const int r = static_cast<int>(std::ceil(radius));
    auto stamp = [&](int pu, int pv) {
        for (int dv = -r; dv <= r; ++dv) {
            for (int du = -r; du <= r; ++du) {
                if (du * du + dv * dv > radius * radius) continue;
                const int x = cx + pu + du;
                const int y = cy + pv + dv;
                if (x < 0 || x >= width || y < 0 || y >= height) continue;
                const double fu = x - cx;
                const double fv = y - cy;
                if (fu * fu + fv * fv <= rp * rp) continue;  // protected disk stays
                pass[static_cast<std::size_t>(y) * width + x] = 0;
            }
        }
    };
    stamp(u, v);
    stamp(-u, -v);
}

Spectrum fft_magnitude(const Image& img) {
    std::vector<double> lum = img.luminance();
    const double mean = kernels::sum(lum.size(), lum.data()) / lum.size();
    for (double& v : lum) v -= mean;

    auto coeffs = dft2(lum, img.width, img.height);

    Spectrum s;
    s.width = img.width;
    s.height = img.height;
    s.magnitude.resize(lum.size());
    s.log_magnitude.resize(lum.size());
    const int cx = img.width / 2;
    const int cy = img.height / 2;
    for (int y = 0; y < img.height; ++y) {
        // fftshift: centered position of raw frequency (y, x)
        const int sy = (y + cy) % img.height;
        for (int x = 0; x < img.width; ++x) {
            const int sx = (x + cx) % img.width;
            const double mag = std::abs(coeffs[static_cast<std::size_t>(y) * img.width + x]);
            s.magnitude[static_cast<std::size_t>(sy) * img.width + sx] = mag;
        }
    }
    for (std::size_t i = 0; i < s.magnitude.size(); ++i) {
        s.log_magnitude[i] = std::log1p(s.magnitude[i]);
    }
    return s;
}

std::vector<SpectralPeak> detect_periodic_peaks(const Spectrum& spec, double min_prominence) {
    const int w = spec.width;
    const int h = spec.height;
    const int cx = w / 2;
    const int cy = h / 2;
    const double rp = protect_radius(w, h);

    std::vector<double> off_disk;
    off_disk.reserve(spec.magnitude.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double fu = x - cx;
            const double fv = y - cy;
            if (fu * fu + fv * fv > rp * rp) {
                off_disk.push_back(spec.at(y, x));
            }
        }
    }
    if (off_disk.empty()) return {};
    std::nth_element(off_disk.begin(), off_disk.begin() + off_disk.size() / 2, off_disk.end());
    const double median = off_disk[off_disk.size() / 2];
    double peak_mag = 0.0;
    for (double v : spec.magnitude) peak_mag = std::max(peak_mag, v);
    // the absolute floor keeps rounding residue out of the candidate set
    const double threshold = std::max(min_prominence * median, 1e-9 * peak_mag);

    struct Candidate {
        int x, y;
        double mag;
    };
    std::vector<Candidate> cands;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double fu = x - cx;
            const double fv = y - cy;
            if (fu * fu + fv * fv <= rp * rp) continue;
            const double m = spec.at(y, x);
            if (m <= threshold || m <= 0.0) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    if (spec.at(ny, nx) >= m) {
                        // strict maximum; ties resolved by row-major priority
                        if (spec.at(ny, nx) > m ||
                            (static_cast<std::size_t>(ny) * w + nx <
                             static_cast<std::size_t>(y) * w + x)) {
                            is_max = false;
                            break;
                        }
                    }
                }
            }
            if (is_max) cands.push_back({x, y, m});
        }
    }

    std::sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.mag != b.mag) return a.mag > b.mag;
        return static_cast<std::size_t>(a.y) * w + a.x < static_cast<std::size_t>(b.y) * w + b.x;
    });

    // Emit each peak together with its point mirror, skipping bins already
    // claimed as a mirror of a stronger peak.
    std::vector<std::uint8_t> claimed(spec.magnitude.size(), 0);
    std::vector<SpectralPeak> out;
    for (const auto& c : cands) {
        const std::size_t idx = static_cast<std::size_t>(c.y) * w + c.x;
        if (claimed[idx]) continue;
        // mirror in raw frequency space, mapped back to centered coords
        const int mx = (2 * cx - c.x % w + w) % w;
        const int my = (2 * cy - c.y % h + h) % h;
        const std::size_t midx = static_cast<std::size_t>(my) * w + mx;
        claimed[idx] = 1;
        claimed[midx] = 1;
        out.push_back({c.x - cx, c.y - cy, c.mag});
        if (midx != idx) {
            out.push_back({mx - cx, my - cy, spec.magnitude[midx]});
        }
    }
    return out;
}

double grid_artifact_score(const Image& img, const GridScoreParams& params) {
    require(img.width >= 32 && img.height >= 32, ErrorKind::size,
            "grid_artifact_score needs at least 32x32 input");
    Spectrum spec = fft_magnitude(img);
    // near-constant images leave only rounding residue in the spectrum
    double peak_mag = 0.0;
    for (double v : spec.magnitude) peak_mag = std::max(peak_mag, v);
    if (peak_mag < 1e-9) return 0.0;

    auto peaks = detect_periodic_peaks(spec, params.min_prominence);
    if (peaks.empty()) return 0.0;

    const int w = spec.width;
    const int h = spec.height;
    const int cx = w / 2;
    const int cy = h / 2;
    const double rp = protect_radius(w, h);

    double total = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double fu = x - cx;
            const double fv = y - cy;
            if (fu * fu + fv * fv > rp * rp) {
                const double m = spec.at(y, x);
                total += m * m;
            }
        }
    }
    if (total <= 0.0) return 0.0;

    std::vector<std::uint8_t> in_peak(spec.magnitude.size(), 0);
    const int d = params.dilate;
    for (const auto& p : peaks) {
        for (int dv = -d; dv <= d; ++dv) {
            for (int du = -d; du <= d; ++du) {
                const int x = cx + p.u + du;
                const int y = cy + p.v + dv;
                if (x < 0 || x >= w || y < 0 || y >= h) continue;
                const double fu = x - cx;
                const double fv = y - cy;
                if (fu * fu + fv * fv <= rp * rp) continue;
                in_peak[static_cast<std::size_t>(y) * w + x] = 1;
            }
        }
    }
    double peak_energy = 0.0;
    for (std::size_t i = 0; i < in_peak.size(); ++i) {
        if (in_peak[i]) peak_energy += spec.magnitude[i] * spec.magnitude[i];
    }
    return peak_energy / total;
}

Image notch_filter(const Image& img, const NotchMask& mask) {
    require(mask.width == img.width && mask.height == img.height, ErrorKind::shape,
            "notch_filter: mask shape differs from image");
    const int w = img.width;
    const int h = img.height;
    const int cx = w / 2;
    const int cy = h / 2;
    const double inv_n = 1.0 / (static_cast<double>(w) * h);

    Image out(w, h, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        std::vector<double> plane(img.plane(c), img.plane(c) + img.pixels());
        auto coeffs = dft2(plane, w, h);
        for (int y = 0; y < h; ++y) {
            const int sy = (y + cy) % h;
            for (int x = 0; x < w; ++x) {
                const int sx = (x + cx) % w;
                if (!mask.pass[static_cast<std::size_t>(sy) * w + sx]) {
                    coeffs[static_cast<std::size_t>(y) * w + x] = 0.0;
                }
            }
        }
        auto back = idft2(coeffs, w, h);
        double* dst = out.plane(c);
        for (std::size_t i = 0; i < back.size(); ++i) dst[i] = back[i].real() * inv_n;
    }
    out.clamp01();
    return out;
}

NotchMask make_notch_mask(int w, int h, const std::vector<SpectralPeak>& peaks, double radius) {
    NotchMask m = NotchMask::all_pass(w, h);
    for (const auto& p : peaks) m.notch(p.u, p.v, radius);
    return m;
}

Image spectrum_to_image(const Spectrum& spec) {
    Image img(spec.width, spec.height, 1);
    const double peak = *std::max_element(spec.log_magnitude.begin(), spec.log_magnitude.end());
    if (peak > 0.0) {
        for (std::size_t i = 0; i < img.data.size(); ++i) {
            img.data[i] = spec.log_magnitude[i] / peak;
        }
    }
    return img;
}

}  // namespace desmoke
