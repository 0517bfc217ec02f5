#pragma once

#include <array>
#include <vector>

#include "desmoke/common.hpp"

namespace desmoke {

// Dense NCHW array of doubles.
struct Tensor {
    int n = 0, c = 0, h = 0, w = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(int n_, int c_, int h_, int w_, double fill = 0.0)
        : n(n_), c(c_), h(h_), w(w_),
          data(static_cast<std::size_t>(n_) * c_ * h_ * w_, fill) {
        require(n_ > 0 && c_ > 0 && h_ > 0 && w_ > 0, ErrorKind::argument,
                "tensor dims must be positive");
    }

    std::size_t size() const { return data.size(); }
    std::size_t plane_size() const { return static_cast<std::size_t>(h) * w; }
    std::size_t item_size() const { return plane_size() * c; }

    double* item(int ni) { return data.data() + ni * item_size(); }
    const double* item(int ni) const { return data.data() + ni * item_size(); }

    double* plane(int ni, int ci) { return item(ni) + ci * plane_size(); }
    const double* plane(int ni, int ci) const { return item(ni) + ci * plane_size(); }

    bool same_shape(const Tensor& o) const {
        return n == o.n && c == o.c && h == o.h && w == o.w;
    }

    void zero() { std::fill(data.begin(), data.end(), 0.0); }
    bool all_finite() const;
};

// Learnable tensor with an accumulated gradient buffer.
struct Param {
    std::string name;
    std::vector<double> value;
    std::vector<double> grad;

    explicit Param(std::string n, std::size_t size)
        : name(std::move(n)), value(size, 0.0), grad(size, 0.0) {}

    void zero_grad() { std::fill(grad.begin(), grad.end(), 0.0); }
};

// Channel-concatenate two tensors (skip connections).
Tensor concat_channels(const Tensor& a, const Tensor& b);

// Split gradient of concat_channels back into the two inputs.
void split_channels(const Tensor& dy, Tensor& da, Tensor& db);

}  // namespace desmoke
