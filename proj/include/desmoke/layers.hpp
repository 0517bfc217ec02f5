#pragma once

#include "desmoke/tensor.hpp"

namespace desmoke {

enum class Mode { train, eval };

// ---- functional layer ops -------------------------------------------------

// Cross-correlation, weights (co, ci, kh, kw) row-major, zero padding.
Tensor conv2d(const Tensor& x, const std::vector<double>& weights,
              const std::vector<double>& bias, int co, int kh, int kw, int stride, int pad);

struct ConvGrads {
    Tensor dx;
    std::vector<double> dweights;
    std::vector<double> dbias;
};

ConvGrads conv2d_backward(const Tensor& x, const std::vector<double>& weights, int co, int kh,
                          int kw, int stride, int pad, const Tensor& dy);

// Transposed convolution (adjoint of conv2d over the same geometry),
// weights (ci, co, kh, kw). Output spatial size is (in-1)*stride - 2*pad + k.
Tensor deconv2d(const Tensor& x, const std::vector<double>& weights,
                const std::vector<double>& bias, int co, int kh, int kw, int stride, int pad);

ConvGrads deconv2d_backward(const Tensor& x, const std::vector<double>& weights, int co, int kh,
                            int kw, int stride, int pad, const Tensor& dy);

// ---- stateful layers ------------------------------------------------------

class Conv2dLayer {
public:
    Conv2dLayer(std::string name, int ci, int co, int k, int stride, int pad)
        : weight(name + ".weight", static_cast<std::size_t>(co) * ci * k * k),
          bias(name + ".bias", co), ci_(ci), co_(co), k_(k), stride_(stride), pad_(pad) {}

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);  // accumulates weight/bias grads

    Param weight, bias;

private:
    int ci_, co_, k_, stride_, pad_;
    Tensor cached_x_;
};

class Deconv2dLayer {
public:
    Deconv2dLayer(std::string name, int ci, int co, int k, int stride, int pad)
        : weight(name + ".weight", static_cast<std::size_t>(ci) * co * k * k),
          bias(name + ".bias", co), ci_(ci), co_(co), k_(k), stride_(stride), pad_(pad) {}

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

    Param weight, bias;

private:
    int ci_, co_, k_, stride_, pad_;
    Tensor cached_x_;
};

// Per-channel standardization over batch and spatial dims (eps 1e-5),
// running stats updated with momentum 0.1 in train mode.
class BatchNorm2dLayer {
public:
    explicit BatchNorm2dLayer(std::string name, int channels)
        : gamma(name + ".gamma", channels), beta(name + ".beta", channels),
          running_mean(channels, 0.0), running_var(channels, 1.0), channels_(channels) {
        std::fill(gamma.value.begin(), gamma.value.end(), 1.0);
    }

    Tensor forward(const Tensor& x, Mode mode);
    Tensor backward(const Tensor& dy);  // only valid after a train forward

    Param gamma, beta;
    std::vector<double> running_mean, running_var;

    static constexpr double kEps = 1e-5;
    static constexpr double kMomentum = 0.1;

private:
    int channels_;
    Tensor xhat_;
    std::vector<double> inv_std_;
    bool train_cached_ = false;
};

class LeakyReluLayer {
public:
    explicit LeakyReluLayer(double slope = 0.2) : slope_(slope) {}

    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);
    double slope() const { return slope_; }

private:
    double slope_;
    Tensor cached_x_;
};

// (tanh(x) + 1) / 2, the [0,1] output head.
class TanhHead {
public:
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);

private:
    Tensor cached_y_;  // raw tanh values
};

}  // namespace desmoke
