#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace desmoke::oracle {

double naive_rmse(const Image& ref, const Image& test) {
    double total = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        const double d = ref.data[i] - test.data[i];
        total += d * d;
    }
    return std::sqrt(total / ref.data.size());
}

double naive_psnr(const Image& ref, const Image& test) {
    double mse = 0.0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
        const double d = ref.data[i] - test.data[i];
        mse += d * d;
    }
    mse /= ref.data.size();
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    double peak = 0.0;
    for (double v : ref.data) peak = std::max(peak, v);
    return 20.0 * std::log10(peak) - 10.0 * std::log10(mse);
}

namespace {

// One window position of (luminance, contrast-structure).
void window_terms(const Image& ref, const Image& test, int c, int y0, int x0,
                  const std::vector<double>& w2d, int n, const SsimParams& p, double& lum,
                  double& cs) {
    double mx = 0, my = 0, mxx = 0, myy = 0, mxy = 0;
    for (int dy = 0; dy < n; ++dy) {
        for (int dx = 0; dx < n; ++dx) {
            const double g = w2d[static_cast<std::size_t>(dy) * n + dx];
            const double a = ref.at(c, y0 + dy, x0 + dx);
            const double b = test.at(c, y0 + dy, x0 + dx);
            mx += g * a;
            my += g * b;
            mxx += g * a * a;
            myy += g * b * b;
            mxy += g * a * b;
        }
    }
    const double vx = mxx - mx * mx;
    const double vy = myy - my * my;
    const double cxy = mxy - mx * my;
    lum = (2.0 * mx * my + p.c1()) / (mx * mx + my * my + p.c1());
    cs = (2.0 * cxy + p.c2()) / (vx + vy + p.c2());
}

std::vector<double> outer_window(const SsimParams& p) {
    const std::vector<double> g = p.window();
    const int n = p.window_size;
    std::vector<double> w2d(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            w2d[static_cast<std::size_t>(y) * n + x] = g[static_cast<std::size_t>(y)] * g[static_cast<std::size_t>(x)];
        }
    }
    return w2d;
}

double mean_over_windows(const Image& ref, const Image& test, const SsimParams& p,
                         bool luminance) {
    const int n = p.window_size;
    const std::vector<double> w2d = outer_window(p);
    double total = 0.0;
    std::size_t count = 0;
    for (int c = 0; c < ref.channels; ++c) {
        for (int y0 = 0; y0 + n <= ref.height; ++y0) {
            for (int x0 = 0; x0 + n <= ref.width; ++x0) {
                double lum, cs;
                window_terms(ref, test, c, y0, x0, w2d, n, p, lum, cs);
                total += luminance ? lum * cs : cs;
                ++count;
            }
        }
    }
    return total / static_cast<double>(count);
}

Image half(const Image& src) {
    Image out(src.width / 2, src.height / 2, src.channels);
    for (int c = 0; c < src.channels; ++c) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                out.at(c, y, x) = 0.25 * (src.at(c, 2 * y, 2 * x) + src.at(c, 2 * y, 2 * x + 1) +
                                          src.at(c, 2 * y + 1, 2 * x) +
                                          src.at(c, 2 * y + 1, 2 * x + 1));
            }
        }
    }
    return out;
}

}  // namespace

double naive_ssim(const Image& ref, const Image& test, const SsimParams& p) {
    return mean_over_windows(ref, test, p, /*luminance=*/true);
}

double naive_ms_ssim(const Image& ref, const Image& test, const MsSsimParams& p) {
    Image a = ref;
    Image b = test;
    double value = 1.0;
    for (int s = 0; s < p.scales; ++s) {
        const bool last = s == p.scales - 1;
        const double term = mean_over_windows(a, b, p.base, last);
        value *= std::pow(std::max(term, 1e-12), p.weights[static_cast<std::size_t>(s)]);
        if (!last) {
            a = half(a);
            b = half(b);
        }
    }
    return value;
}

std::vector<double> naive_dark_channel(const Image& img, int patch) {
    const int r = patch / 2;
    std::vector<double> out(img.pixels());
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double m = 1e300;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int yy = std::clamp(y + dy, 0, img.height - 1);
                    const int xx = std::clamp(x + dx, 0, img.width - 1);
                    for (int c = 0; c < img.channels; ++c) m = std::min(m, img.at(c, yy, xx));
                }
            }
            out[static_cast<std::size_t>(y) * img.width + x] = m;
        }
    }
    return out;
}

Tensor naive_conv2d(const Tensor& x, const std::vector<double>& w, const std::vector<double>& b,
                    int co, int kh, int kw, int stride, int pad) {
    const int ho = (x.h + 2 * pad - kh) / stride + 1;
    const int wo = (x.w + 2 * pad - kw) / stride + 1;
    Tensor out(x.n, co, ho, wo);
    for (int ni = 0; ni < x.n; ++ni) {
        for (int oc = 0; oc < co; ++oc) {
            for (int oy = 0; oy < ho; ++oy) {
                for (int ox = 0; ox < wo; ++ox) {
                    double acc = b[static_cast<std::size_t>(oc)];
                    for (int ci = 0; ci < x.c; ++ci) {
                        for (int ky = 0; ky < kh; ++ky) {
                            for (int kx = 0; kx < kw; ++kx) {
                                const int iy = oy * stride + ky - pad;
                                const int ix = ox * stride + kx - pad;
                                if (iy < 0 || iy >= x.h || ix < 0 || ix >= x.w) continue;
                                const double xv =
                                    x.plane(ni, ci)[static_cast<std::size_t>(iy) * x.w + ix];
                                acc += xv * w[((static_cast<std::size_t>(oc) * x.c + ci) * kh + ky) * kw + kx];
                            }
                        }
                    }
                    out.plane(ni, oc)[static_cast<std::size_t>(oy) * wo + ox] = acc;
                }
            }
        }
    }
    return out;
}

std::vector<double> finite_diff(const std::function<double()>& f, double* x, std::size_t n,
                                double h) {
    std::vector<double> grad(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double keep = x[i];
        x[i] = keep + h;
        const double fp = f();
        x[i] = keep - h;
        const double fm = f();
        x[i] = keep;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

double max_rel_err(const std::vector<double>& a, const std::vector<double>& b, double floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / denom);
    }
    return worst;
}

CheckedDiff finite_diff_checked(const std::function<double()>& f, double* x, std::size_t n,
                                double h) {
    CheckedDiff out;
    out.grad = finite_diff(f, x, n, h / 2.0);
    std::vector<double> coarse = finite_diff(f, x, n, h);
    out.reliable.assign(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double scale = std::max({std::fabs(coarse[i]), std::fabs(out.grad[i]), 1e-6});
        if (std::fabs(coarse[i] - out.grad[i]) > 1e-2 * scale) {
            out.reliable[i] = 0;
            ++out.unreliable_count;
        }
    }
    return out;
}

double max_rel_err_reliable(const std::vector<double>& a, const CheckedDiff& fd, double floor) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!fd.reliable[i]) continue;
        const double denom = std::max({std::fabs(a[i]), std::fabs(fd.grad[i]), floor});
        worst = std::max(worst, std::fabs(a[i] - fd.grad[i]) / denom);
    }
    return worst;
}

}  // namespace desmoke::oracle
