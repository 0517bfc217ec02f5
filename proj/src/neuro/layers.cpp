#include "desmoke/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "desmoke/kernels.hpp"

namespace desmoke {

namespace {

inline int conv_out(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

// Copy one channel plane into a zero-padded scratch buffer.
void pad_plane(const double* src, int h, int w, int pad, double* dst) {
    const int pw = w + 2 * pad;
    std::fill(dst, dst + static_cast<std::size_t>(pw) * (h + 2 * pad), 0.0);
    for (int y = 0; y < h; ++y) {
        std::memcpy(dst + static_cast<std::size_t>(y + pad) * pw + pad,
                    src + static_cast<std::size_t>(y) * w, w * sizeof(double));
    }
}

inline std::size_t widx(int co, int ci, int ky, int kx, int nci, int kh, int kw) {
    return ((static_cast<std::size_t>(co) * nci + ci) * kh + ky) * kw + kx;
}

}  // namespace

Tensor conv2d(const Tensor& x, const std::vector<double>& weights,
              const std::vector<double>& bias, int co, int kh, int kw, int stride, int pad) {
    require(stride == 1 || stride == 2, ErrorKind::argument, "conv2d stride must be 1 or 2");
    require(weights.size() == static_cast<std::size_t>(co) * x.c * kh * kw &&
                bias.size() == static_cast<std::size_t>(co),
            ErrorKind::shape, "conv2d: weight/bias shape mismatch");
    const int ho = conv_out(x.h, kh, stride, pad);
    const int wo = conv_out(x.w, kw, stride, pad);
    require(ho > 0 && wo > 0, ErrorKind::shape, "conv2d: input smaller than kernel");

    const int ph = x.h + 2 * pad;
    const int pw = x.w + 2 * pad;
    std::vector<double> padded(static_cast<std::size_t>(x.c) * ph * pw);

    Tensor out(x.n, co, ho, wo);
    for (int ni = 0; ni < x.n; ++ni) {
        for (int ci = 0; ci < x.c; ++ci) {
            pad_plane(x.plane(ni, ci), x.h, x.w, pad, padded.data() + static_cast<std::size_t>(ci) * ph * pw);
        }
        for (int oc = 0; oc < co; ++oc) {
            double* oplane = out.plane(ni, oc);
            std::fill(oplane, oplane + out.plane_size(), bias[static_cast<std::size_t>(oc)]);
            for (int ci = 0; ci < x.c; ++ci) {
                const double* pp = padded.data() + static_cast<std::size_t>(ci) * ph * pw;
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const double wgt = weights[widx(oc, ci, ky, kx, x.c, kh, kw)];
                        if (wgt == 0.0) continue;
                        for (int oy = 0; oy < ho; ++oy) {
                            const double* srow =
                                pp + static_cast<std::size_t>(oy * stride + ky) * pw + kx;
                            double* orow = oplane + static_cast<std::size_t>(oy) * wo;
                            if (stride == 1) {
                                kernels::axpy(wo, wgt, srow, orow);
                            } else {
                                kernels::axpy_g2(wo, wgt, srow, orow);
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

ConvGrads conv2d_backward(const Tensor& x, const std::vector<double>& weights, int co, int kh,
                          int kw, int stride, int pad, const Tensor& dy) {
    const int ho = conv_out(x.h, kh, stride, pad);
    const int wo = conv_out(x.w, kw, stride, pad);
    require(dy.n == x.n && dy.c == co && dy.h == ho && dy.w == wo, ErrorKind::shape,
            "conv2d_backward: upstream shape mismatch");

    ConvGrads g;
    g.dx = Tensor(x.n, x.c, x.h, x.w);
    g.dweights.assign(weights.size(), 0.0);
    g.dbias.assign(co, 0.0);

    const int ph = x.h + 2 * pad;
    const int pw = x.w + 2 * pad;
    std::vector<double> padded(static_cast<std::size_t>(x.c) * ph * pw);
    std::vector<double> dpadded(static_cast<std::size_t>(x.c) * ph * pw);

    for (int ni = 0; ni < x.n; ++ni) {
        for (int ci = 0; ci < x.c; ++ci) {
            pad_plane(x.plane(ni, ci), x.h, x.w, pad,
                      padded.data() + static_cast<std::size_t>(ci) * ph * pw);
        }
        std::fill(dpadded.begin(), dpadded.end(), 0.0);

        for (int oc = 0; oc < co; ++oc) {
            const double* dplane = dy.plane(ni, oc);
            g.dbias[static_cast<std::size_t>(oc)] += kernels::sum(dy.plane_size(), dplane);
            for (int ci = 0; ci < x.c; ++ci) {
                const double* pp = padded.data() + static_cast<std::size_t>(ci) * ph * pw;
                double* dpp = dpadded.data() + static_cast<std::size_t>(ci) * ph * pw;
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const std::size_t wi = widx(oc, ci, ky, kx, x.c, kh, kw);
                        const double wgt = weights[wi];
                        double dw = 0.0;
                        for (int oy = 0; oy < ho; ++oy) {
                            const double* srow =
                                pp + static_cast<std::size_t>(oy * stride + ky) * pw + kx;
                            double* dsrow =
                                dpp + static_cast<std::size_t>(oy * stride + ky) * pw + kx;
                            const double* drow = dplane + static_cast<std::size_t>(oy) * wo;
                            if (stride == 1) {
                                dw += kernels::dot(wo, drow, srow);
                                kernels::axpy(wo, wgt, drow, dsrow);
                            } else {
                                dw += kernels::dot_g2(wo, srow, drow);
                                kernels::axpy_s2(wo, wgt, drow, dsrow);
                            }
                        }
                        g.dweights[wi] += dw;
                    }
                }
            }
        }
        // crop padding off the accumulated input gradient
        for (int ci = 0; ci < x.c; ++ci) {
            const double* dpp = dpadded.data() + static_cast<std::size_t>(ci) * ph * pw;
            double* dst = g.dx.plane(ni, ci);
            for (int y = 0; y < x.h; ++y) {
                std::memcpy(dst + static_cast<std::size_t>(y) * x.w,
                            dpp + static_cast<std::size_t>(y + pad) * pw + pad,
                            x.w * sizeof(double));
            }
        }
    }
    return g;
}

Tensor deconv2d(const Tensor& x, const std::vector<double>& weights,
                const std::vector<double>& bias, int co, int kh, int kw, int stride, int pad) {
    require(stride == 1 || stride == 2, ErrorKind::argument, "deconv2d stride must be 1 or 2");
    require(weights.size() == static_cast<std::size_t>(x.c) * co * kh * kw &&
                bias.size() == static_cast<std::size_t>(co),
            ErrorKind::shape, "deconv2d: weight/bias shape mismatch");
    const int ho = (x.h - 1) * stride - 2 * pad + kh;
    const int wo = (x.w - 1) * stride - 2 * pad + kw;
    require(ho > 0 && wo > 0, ErrorKind::shape, "deconv2d: degenerate output");

    // scatter grid before cropping the pad border
    const int gh = (x.h - 1) * stride + kh;
    const int gw = (x.w - 1) * stride + kw;
    std::vector<double> grid(static_cast<std::size_t>(gh) * gw);

    Tensor out(x.n, co, ho, wo);
    for (int ni = 0; ni < x.n; ++ni) {
        for (int oc = 0; oc < co; ++oc) {
            std::fill(grid.begin(), grid.end(), 0.0);
            for (int ci = 0; ci < x.c; ++ci) {
                const double* ip = x.plane(ni, ci);
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const double wgt = weights[widx(ci, oc, ky, kx, co, kh, kw)];
                        if (wgt == 0.0) continue;
                        for (int iy = 0; iy < x.h; ++iy) {
                            const double* irow = ip + static_cast<std::size_t>(iy) * x.w;
                            double* grow =
                                grid.data() + static_cast<std::size_t>(iy * stride + ky) * gw + kx;
                            if (stride == 1) {
                                kernels::axpy(x.w, wgt, irow, grow);
                            } else {
                                kernels::axpy_s2(x.w, wgt, irow, grow);
                            }
                        }
                    }
                }
            }
            double* oplane = out.plane(ni, oc);
            const double b = bias[static_cast<std::size_t>(oc)];
            for (int y = 0; y < ho; ++y) {
                const double* grow = grid.data() + static_cast<std::size_t>(y + pad) * gw + pad;
                double* orow = oplane + static_cast<std::size_t>(y) * wo;
                for (int xw = 0; xw < wo; ++xw) orow[xw] = grow[xw] + b;
            }
        }
    }
    return out;
}

ConvGrads deconv2d_backward(const Tensor& x, const std::vector<double>& weights, int co, int kh,
                            int kw, int stride, int pad, const Tensor& dy) {
    const int ho = (x.h - 1) * stride - 2 * pad + kh;
    const int wo = (x.w - 1) * stride - 2 * pad + kw;
    require(dy.n == x.n && dy.c == co && dy.h == ho && dy.w == wo, ErrorKind::shape,
            "deconv2d_backward: upstream shape mismatch");

    ConvGrads g;
    g.dx = Tensor(x.n, x.c, x.h, x.w);
    g.dweights.assign(weights.size(), 0.0);
    g.dbias.assign(co, 0.0);

    const int gh = (x.h - 1) * stride + kh;
    const int gw = (x.w - 1) * stride + kw;
    std::vector<double> dgrid(static_cast<std::size_t>(gh) * gw);

    for (int ni = 0; ni < x.n; ++ni) {
        for (int oc = 0; oc < co; ++oc) {
            const double* dplane = dy.plane(ni, oc);
            g.dbias[static_cast<std::size_t>(oc)] += kernels::sum(dy.plane_size(), dplane);

            // re-embed dy into the uncropped scatter grid
            std::fill(dgrid.begin(), dgrid.end(), 0.0);
            for (int y = 0; y < ho; ++y) {
                std::memcpy(dgrid.data() + static_cast<std::size_t>(y + pad) * gw + pad,
                            dplane + static_cast<std::size_t>(y) * wo, wo * sizeof(double));
            }

            for (int ci = 0; ci < x.c; ++ci) {
                const double* ip = x.plane(ni, ci);
                double* dxp = g.dx.plane(ni, ci);
                for (int ky = 0; ky < kh; ++ky) {
                    for (int kx = 0; kx < kw; ++kx) {
                        const std::size_t wi = widx(ci, oc, ky, kx, co, kh, kw);
                        const double wgt = weights[wi];
                        double dw = 0.0;
                        for (int iy = 0; iy < x.h; ++iy) {
                            const double* irow = ip + static_cast<std::size_t>(iy) * x.w;
                            double* dxrow = dxp + static_cast<std::size_t>(iy) * x.w;
                            const double* grow =
                                dgrid.data() + static_cast<std::size_t>(iy * stride + ky) * gw + kx;
                            if (stride == 1) {
                                dw += kernels::dot(x.w, grow, irow);
                                kernels::axpy(x.w, wgt, grow, dxrow);
                            } else {
                                dw += kernels::dot_g2(x.w, grow, irow);
                                kernels::axpy_g2(x.w, wgt, grow, dxrow);
                            }
                        }
                        g.dweights[wi] += dw;
                    }
                }
            }
        }
    }
    return g;
}

Tensor Conv2dLayer::forward(const Tensor& x) {
    require(x.c == ci_, ErrorKind::shape, "conv layer: channel mismatch");
    cached_x_ = x;
    return conv2d(x, weight.value, bias.value, co_, k_, k_, stride_, pad_);
}

Tensor Conv2dLayer::backward(const Tensor& dy) {
    ConvGrads g = conv2d_backward(cached_x_, weight.value, co_, k_, k_, stride_, pad_, dy);
    kernels::axpy(weight.grad.size(), 1.0, g.dweights.data(), weight.grad.data());
    kernels::axpy(bias.grad.size(), 1.0, g.dbias.data(), bias.grad.data());
    return std::move(g.dx);
}

Tensor Deconv2dLayer::forward(const Tensor& x) {
    require(x.c == ci_, ErrorKind::shape, "deconv layer: channel mismatch");
    cached_x_ = x;
    return deconv2d(x, weight.value, bias.value, co_, k_, k_, stride_, pad_);
}

Tensor Deconv2dLayer::backward(const Tensor& dy) {
    ConvGrads g = deconv2d_backward(cached_x_, weight.value, co_, k_, k_, stride_, pad_, dy);
    kernels::axpy(weight.grad.size(), 1.0, g.dweights.data(), weight.grad.data());
    kernels::axpy(bias.grad.size(), 1.0, g.dbias.data(), bias.grad.data());
    return std::move(g.dx);
}

Tensor BatchNorm2dLayer::forward(const Tensor& x, Mode mode) {
    require(x.c == channels_, ErrorKind::shape, "batchnorm: channel mismatch");
    const std::size_t count = static_cast<std::size_t>(x.n) * x.plane_size();
    Tensor y(x.n, x.c, x.h, x.w);

    if (mode == Mode::train) {
        require(count >= 2, ErrorKind::numeric, "batchnorm: train mode needs >= 2 samples");
        xhat_ = Tensor(x.n, x.c, x.h, x.w);
        inv_std_.assign(channels_, 0.0);
        train_cached_ = true;
        for (int c = 0; c < channels_; ++c) {
            double total = 0.0;
            for (int ni = 0; ni < x.n; ++ni) total += kernels::sum(x.plane_size(), x.plane(ni, c));
            const double mean = total / static_cast<double>(count);
            double var = 0.0;
            for (int ni = 0; ni < x.n; ++ni) {
                const double* p = x.plane(ni, c);
                for (std::size_t i = 0; i < x.plane_size(); ++i) {
                    const double d = p[i] - mean;
                    var += d * d;
                }
            }
            var /= static_cast<double>(count);
            const double inv = 1.0 / std::sqrt(var + kEps);
            inv_std_[static_cast<std::size_t>(c)] = inv;

            running_mean[static_cast<std::size_t>(c)] =
                (1.0 - kMomentum) * running_mean[static_cast<std::size_t>(c)] + kMomentum * mean;
            running_var[static_cast<std::size_t>(c)] =
                (1.0 - kMomentum) * running_var[static_cast<std::size_t>(c)] + kMomentum * var;

            const double gm = gamma.value[static_cast<std::size_t>(c)];
            const double bt = beta.value[static_cast<std::size_t>(c)];
            for (int ni = 0; ni < x.n; ++ni) {
                kernels::affine(x.plane_size(), x.plane(ni, c), mean, inv, 0.0, xhat_.plane(ni, c));
                kernels::affine(x.plane_size(), xhat_.plane(ni, c), 0.0, gm, bt, y.plane(ni, c));
            }
        }
    } else {
        train_cached_ = false;
        for (int c = 0; c < channels_; ++c) {
            const double mean = running_mean[static_cast<std::size_t>(c)];
            const double inv = 1.0 / std::sqrt(running_var[static_cast<std::size_t>(c)] + kEps);
            const double gm = gamma.value[static_cast<std::size_t>(c)];
            const double bt = beta.value[static_cast<std::size_t>(c)];
            for (int ni = 0; ni < x.n; ++ni) {
                kernels::affine(x.plane_size(), x.plane(ni, c), mean, inv * gm, bt, y.plane(ni, c));
            }
        }
    }
    return y;
}

Tensor BatchNorm2dLayer::backward(const Tensor& dy) {
    require(train_cached_, ErrorKind::argument, "batchnorm backward without train forward");
    require(dy.same_shape(xhat_), ErrorKind::shape, "batchnorm backward: shape mismatch");
    const std::size_t count = static_cast<std::size_t>(dy.n) * dy.plane_size();
    const double inv_count = 1.0 / static_cast<double>(count);

    Tensor dx(dy.n, dy.c, dy.h, dy.w);
    for (int c = 0; c < channels_; ++c) {
        double sum_dy = 0.0;
        double sum_dy_xhat = 0.0;
        for (int ni = 0; ni < dy.n; ++ni) {
            sum_dy += kernels::sum(dy.plane_size(), dy.plane(ni, c));
            sum_dy_xhat += kernels::dot(dy.plane_size(), dy.plane(ni, c), xhat_.plane(ni, c));
        }
        gamma.grad[static_cast<std::size_t>(c)] += sum_dy_xhat;
        beta.grad[static_cast<std::size_t>(c)] += sum_dy;

        const double gm = gamma.value[static_cast<std::size_t>(c)];
        const double inv = inv_std_[static_cast<std::size_t>(c)];
        const double mean_dy = sum_dy * inv_count;
        const double mean_dy_xhat = sum_dy_xhat * inv_count;
        for (int ni = 0; ni < dy.n; ++ni) {
            const double* dyp = dy.plane(ni, c);
            const double* xh = xhat_.plane(ni, c);
            double* dxp = dx.plane(ni, c);
            for (std::size_t i = 0; i < dy.plane_size(); ++i) {
                dxp[i] = gm * inv * (dyp[i] - mean_dy - xh[i] * mean_dy_xhat);
            }
        }
    }
    return dx;
}

Tensor LeakyReluLayer::forward(const Tensor& x) {
    cached_x_ = x;
    Tensor y(x.n, x.c, x.h, x.w);
    kernels::leaky_relu_fwd(x.size(), x.data.data(), slope_, y.data.data());
    return y;
}

Tensor LeakyReluLayer::backward(const Tensor& dy) {
    require(dy.same_shape(cached_x_), ErrorKind::shape, "leaky_relu backward: shape mismatch");
    Tensor dx(dy.n, dy.c, dy.h, dy.w);
    kernels::leaky_relu_bwd(dy.size(), cached_x_.data.data(), dy.data.data(), slope_,
                            dx.data.data());
    return dx;
}

Tensor TanhHead::forward(const Tensor& x) {
    Tensor y(x.n, x.c, x.h, x.w);
    cached_y_ = Tensor(x.n, x.c, x.h, x.w);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::tanh(x.data[i]);
        cached_y_.data[i] = t;
        y.data[i] = 0.5 * (t + 1.0);
    }
    return y;
}

Tensor TanhHead::backward(const Tensor& dy) {
    require(dy.same_shape(cached_y_), ErrorKind::shape, "tanh backward: shape mismatch");
    Tensor dx(dy.n, dy.c, dy.h, dy.w);
    for (std::size_t i = 0; i < dy.size(); ++i) {
        const double t = cached_y_.data[i];
        dx.data[i] = dy.data[i] * 0.5 * (1.0 - t * t);
    }
    return dx;
}

}  // namespace desmoke
