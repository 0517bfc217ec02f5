#include "desmoke/ssim.hpp"

#include <algorithm>
#include <cmath>

#include "desmoke/kernels.hpp"

namespace desmoke {

namespace {

// Positivity floor for the per-scale factors entering the geometric
// product; covariance terms can go slightly negative on adversarial
// inputs and pow() needs a positive base.
constexpr double kScaleFloor = 1e-12;

// Valid-mode separable correlation with a symmetric 1-D window applied
// along both axes. src is w x h, dst is (w-n+1) x (h-n+1).
void blur_valid(const double* src, int w, int h, const std::vector<double>& g, double* dst,
                std::vector<double>& tmp) {
    const int n = static_cast<int>(g.size());
    const int vw = w - n + 1;
    const int vh = h - n + 1;
    tmp.assign(static_cast<std::size_t>(vh) * w, 0.0);
    for (int y = 0; y < vh; ++y) {
        double* trow = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int k = 0; k < n; ++k) {
            kernels::axpy(w, g[k], src + static_cast<std::size_t>(y + k) * w, trow);
        }
    }
    std::fill(dst, dst + static_cast<std::size_t>(vw) * vh, 0.0);
    for (int y = 0; y < vh; ++y) {
        const double* trow = tmp.data() + static_cast<std::size_t>(y) * w;
        double* drow = dst + static_cast<std::size_t>(y) * vw;
        for (int l = 0; l < n; ++l) {
            kernels::axpy(vw, g[l], trow + l, drow);
        }
    }
}

// Adjoint of blur_valid: spreads a window-grid map back over pixel space.
// m is (w-n+1) x (h-n+1), dst is w x h and is accumulated into.
void blur_adjoint(const double* m, int w, int h, const std::vector<double>& g, double* dst,
                  std::vector<double>& tmp) {
    const int n = static_cast<int>(g.size());
    const int vw = w - n + 1;
    const int vh = h - n + 1;
    tmp.assign(static_cast<std::size_t>(vh) * w, 0.0);
    for (int y = 0; y < vh; ++y) {
        const double* mrow = m + static_cast<std::size_t>(y) * vw;
        double* trow = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int l = 0; l < n; ++l) {
            kernels::axpy(vw, g[l], mrow, trow + l);
        }
    }
    for (int y = 0; y < vh; ++y) {
        const double* trow = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int k = 0; k < n; ++k) {
            kernels::axpy(w, g[k], trow, dst + static_cast<std::size_t>(y + k) * w);
        }
    }
}

struct WindowStats {
    int vw = 0, vh = 0;
    std::vector<double> mu_x, mu_y, m_xx, m_yy, m_xy;
};

void window_stats(const double* x, const double* y, int w, int h, const std::vector<double>& g,
                  WindowStats& s) {
    const int n = static_cast<int>(g.size());
    s.vw = w - n + 1;
    s.vh = h - n + 1;
    const std::size_t np = static_cast<std::size_t>(w) * h;
    const std::size_t nv = static_cast<std::size_t>(s.vw) * s.vh;
    s.mu_x.resize(nv);
    s.mu_y.resize(nv);
    s.m_xx.resize(nv);
    s.m_yy.resize(nv);
    s.m_xy.resize(nv);

    std::vector<double> prod(np), tmp;
    blur_valid(x, w, h, g, s.mu_x.data(), tmp);
    blur_valid(y, w, h, g, s.mu_y.data(), tmp);
    for (std::size_t i = 0; i < np; ++i) prod[i] = x[i] * x[i];
    blur_valid(prod.data(), w, h, g, s.m_xx.data(), tmp);
    for (std::size_t i = 0; i < np; ++i) prod[i] = y[i] * y[i];
    blur_valid(prod.data(), w, h, g, s.m_yy.data(), tmp);
    for (std::size_t i = 0; i < np; ++i) prod[i] = x[i] * y[i];
    blur_valid(prod.data(), w, h, g, s.m_xy.data(), tmp);
}

// One channel of SSIM (or contrast-structure only when `luminance` is
// false). Returns the sum of the per-window map; if grad buffers are
// requested, fills the three adjoint source maps:
//   grad_p = base(p) + y_p * u(p) + x_p * v(p)           (scaled later)
struct ChannelMaps {
    std::vector<double> base, u, v;  // window-grid maps for the adjoint
};

double ssim_channel_sum(const double* x, const double* y, int w, int h,
                        const std::vector<double>& g, const SsimParams& p, bool luminance,
                        ChannelMaps* maps) {
    WindowStats s;
    window_stats(x, y, w, h, g, s);
    const std::size_t nv = static_cast<std::size_t>(s.vw) * s.vh;
    const double c1 = p.c1();
    const double c2 = p.c2();

    if (maps) {
        maps->base.assign(nv, 0.0);
        maps->u.assign(nv, 0.0);
        maps->v.assign(nv, 0.0);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
        const double mx = s.mu_x[i];
        const double my = s.mu_y[i];
        const double vx = s.m_xx[i] - mx * mx;
        const double vy = s.m_yy[i] - my * my;
        const double cxy = s.m_xy[i] - mx * my;

        const double a2 = 2.0 * cxy + c2;
        const double b2 = vx + vy + c2;
        double value, d_mu_y, d_var_y, d_cov;
        if (luminance) {
            const double a1 = 2.0 * mx * my + c1;
            const double b1 = mx * mx + my * my + c1;
            value = (a1 * a2) / (b1 * b2);
            d_mu_y = 2.0 * a2 * (mx * b1 - my * a1) / (b1 * b1 * b2);
            d_var_y = -(a1 * a2) / (b1 * b2 * b2);
            d_cov = 2.0 * a1 / (b1 * b2);
        } else {
            value = a2 / b2;
            d_mu_y = 0.0;
            d_var_y = -a2 / (b2 * b2);
            d_cov = 2.0 / b2;
        }
        total += value;

        if (maps) {
            // d/dy_i = g_i * [d_mu_y + d_var_y*2*(y_i - my) + d_cov*(x_i - mx)]
            maps->base[i] = d_mu_y - 2.0 * d_var_y * my - d_cov * mx;
            maps->u[i] = 2.0 * d_var_y;
            maps->v[i] = d_cov;
        }
    }
    return total;
}

// Accumulates scale * (adjoint-combined gradient) for one channel.
void accumulate_grad(const double* x, const double* y, int w, int h,
                     const std::vector<double>& g, const ChannelMaps& maps, double scale,
                     double* grad) {
    const std::size_t np = static_cast<std::size_t>(w) * h;
    std::vector<double> base(np, 0.0), u(np, 0.0), v(np, 0.0), tmp;
    blur_adjoint(maps.base.data(), w, h, g, base.data(), tmp);
    blur_adjoint(maps.u.data(), w, h, g, u.data(), tmp);
    blur_adjoint(maps.v.data(), w, h, g, v.data(), tmp);
    for (std::size_t i = 0; i < np; ++i) {
        grad[i] += scale * (base[i] + y[i] * u[i] + x[i] * v[i]);
    }
}

// Mean over channels and window positions; optionally the gradient
// w.r.t. `test` (accumulated into grad scaled by grad_scale).
double ssim_mean(const double* ref, const double* test, int w, int h, int channels,
                 const SsimParams& p, bool luminance, double* grad, double grad_scale) {
    require(w >= p.window_size && h >= p.window_size, ErrorKind::size,
            "image smaller than the SSIM window");
    const std::vector<double> g = p.window();
    const std::size_t np = static_cast<std::size_t>(w) * h;
    const std::size_t nv =
        static_cast<std::size_t>(w - p.window_size + 1) * (h - p.window_size + 1);
    const double norm = 1.0 / (static_cast<double>(nv) * channels);

    double total = 0.0;
    for (int c = 0; c < channels; ++c) {
        const double* x = ref + c * np;
        const double* y = test + c * np;
        ChannelMaps maps;
        total += ssim_channel_sum(x, y, w, h, g, p, luminance, grad ? &maps : nullptr);
        if (grad) {
            accumulate_grad(x, y, w, h, g, maps, grad_scale * norm, grad + c * np);
        }
    }
    return total * norm;
}

void downsample2(const double* src, int w, int h, int channels, std::vector<double>& dst,
                 int& dw, int& dh) {
    dw = w / 2;
    dh = h / 2;
    dst.assign(static_cast<std::size_t>(dw) * dh * channels, 0.0);
    for (int c = 0; c < channels; ++c) {
        const double* sp = src + static_cast<std::size_t>(c) * w * h;
        double* dp = dst.data() + static_cast<std::size_t>(c) * dw * dh;
        for (int y = 0; y < dh; ++y) {
            for (int x = 0; x < dw; ++x) {
                const double* r0 = sp + static_cast<std::size_t>(2 * y) * w + 2 * x;
                const double* r1 = r0 + w;
                dp[static_cast<std::size_t>(y) * dw + x] =
                    0.25 * (r0[0] + r0[1] + r1[0] + r1[1]);
            }
        }
    }
}

// Adjoint of downsample2: each pooled-grid value spreads /4 to its 2x2
// source cells (odd trailing row/column receives nothing).
void upsample2_adjoint(const double* src, int dw, int dh, int channels, int w, int h,
                       std::vector<double>& dst) {
    dst.assign(static_cast<std::size_t>(w) * h * channels, 0.0);
    for (int c = 0; c < channels; ++c) {
        const double* sp = src + static_cast<std::size_t>(c) * dw * dh;
        double* dp = dst.data() + static_cast<std::size_t>(c) * w * h;
        for (int y = 0; y < dh; ++y) {
            for (int x = 0; x < dw; ++x) {
                double v = 0.25 * sp[static_cast<std::size_t>(y) * dw + x];
                double* r0 = dp + static_cast<std::size_t>(2 * y) * w + 2 * x;
                r0[0] += v;
                r0[1] += v;
                r0[w] += v;
                r0[w + 1] += v;
            }
        }
    }
}

}  // namespace

std::vector<double> SsimParams::window() const {
    require(window_size > 0 && window_size % 2 == 1, ErrorKind::argument,
            "window_size must be odd and positive");
    std::vector<double> g(window_size);
    const double half = (window_size - 1) / 2.0;
    double total = 0.0;
    for (int i = 0; i < window_size; ++i) {
        double d = i - half;
        g[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
        total += g[i];
    }
    for (double& v : g) v /= total;
    return g;
}

MsSsimParams MsSsimParams::for_size(int w, int h, const SsimParams& base) {
    MsSsimParams p;
    p.base = base;
    int side = std::min(w, h);
    int scales = 0;
    while (scales < 5 && side >= base.window_size) {
        ++scales;
        side /= 2;
    }
    require(scales >= 1, ErrorKind::size, "image smaller than the SSIM window");
    p.scales = scales;
    p.weights.resize(scales);
    double total = 0.0;
    for (double v : p.weights) total += v;
    for (double& v : p.weights) v /= total;
    return p;
}

double ssim_buf(const double* ref, const double* test, int w, int h, int channels,
                const SsimParams& p, double* grad) {
    if (grad) std::fill(grad, grad + static_cast<std::size_t>(w) * h * channels, 0.0);
    return ssim_mean(ref, test, w, h, channels, p, /*luminance=*/true, grad, 1.0);
}

double ms_ssim_buf(const double* ref, const double* test, int w, int h, int channels,
                   const MsSsimParams& p, double* grad) {
    require(p.scales >= 1 && static_cast<int>(p.weights.size()) == p.scales,
            ErrorKind::argument, "ms-ssim weights must match scale count");
    const int need = p.base.window_size << (p.scales - 1);
    require(w >= need && h >= need, ErrorKind::size,
            "image too small for the requested ms-ssim scales");

    const std::size_t n0 = static_cast<std::size_t>(w) * h * channels;
    if (grad) std::fill(grad, grad + n0, 0.0);

    // Forward pass through the pyramid, keeping each level's images.
    std::vector<std::vector<double>> xs(p.scales), ys(p.scales);
    std::vector<int> ws(p.scales), hs(p.scales);
    xs[0].assign(ref, ref + n0);
    ys[0].assign(test, test + n0);
    ws[0] = w;
    hs[0] = h;
    for (int j = 1; j < p.scales; ++j) {
        downsample2(xs[j - 1].data(), ws[j - 1], hs[j - 1], channels, xs[j], ws[j], hs[j]);
        std::vector<double> tmp;
        downsample2(ys[j - 1].data(), ws[j - 1], hs[j - 1], channels, tmp, ws[j], hs[j]);
        ys[j] = std::move(tmp);
    }

    std::vector<double> factors(p.scales);
    std::vector<std::vector<double>> level_grads(p.scales);
    for (int j = 0; j < p.scales; ++j) {
        const bool last = j == p.scales - 1;
        double* g = nullptr;
        if (grad) {
            level_grads[j].assign(static_cast<std::size_t>(ws[j]) * hs[j] * channels, 0.0);
            g = level_grads[j].data();
        }
        factors[j] = ssim_mean(xs[j].data(), ys[j].data(), ws[j], hs[j], channels, p.base,
                               /*luminance=*/last, g, 1.0);
    }

    double value = 1.0;
    for (int j = 0; j < p.scales; ++j) {
        value *= std::pow(std::max(factors[j], kScaleFloor), p.weights[j]);
    }

    if (grad) {
        for (int j = 0; j < p.scales; ++j) {
            if (factors[j] <= kScaleFloor) continue;  // clamped factor: zero gradient
            const double coef = value * p.weights[j] / factors[j];
            // Chain back through j mean-pool steps to full resolution.
            std::vector<double> cur = std::move(level_grads[j]);
            for (int k = j; k >= 1; --k) {
                std::vector<double> up;
                upsample2_adjoint(cur.data(), ws[k], hs[k], channels, ws[k - 1], hs[k - 1], up);
                cur = std::move(up);
            }
            kernels::axpy(n0, coef, cur.data(), grad);
        }
    }
    return value;
}

double ssim(const Image& ref, const Image& test, const SsimParams& p) {
    require_same_shape(ref, test, "ssim");
    return ssim_buf(ref.data.data(), test.data.data(), ref.width, ref.height, ref.channels, p,
                    nullptr);
}

double ssim_loss(const Image& ref, const Image& test, const SsimParams& p) {
    return -ssim(ref, test, p);
}

std::vector<double> ssim_grad(const Image& ref, const Image& test, const SsimParams& p) {
    require_same_shape(ref, test, "ssim_grad");
    std::vector<double> grad(ref.size());
    ssim_buf(ref.data.data(), test.data.data(), ref.width, ref.height, ref.channels, p,
             grad.data());
    return grad;
}

double ms_ssim(const Image& ref, const Image& test, const MsSsimParams& p) {
    require_same_shape(ref, test, "ms_ssim");
    return ms_ssim_buf(ref.data.data(), test.data.data(), ref.width, ref.height, ref.channels, p,
                       nullptr);
}

std::vector<double> ms_ssim_grad(const Image& ref, const Image& test, const MsSsimParams& p) {
    require_same_shape(ref, test, "ms_ssim_grad");
    std::vector<double> grad(ref.size());
    ms_ssim_buf(ref.data.data(), test.data.data(), ref.width, ref.height, ref.channels, p,
                grad.data());
    return grad;
}

}  // namespace desmoke
