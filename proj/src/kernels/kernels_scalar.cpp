#include "desmoke/kernels.hpp"

#include <cmath>

namespace desmoke::kernels::scalar {

void axpy(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_g2(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[2 * i];
}

void axpy_s2(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[2 * i] += a * x[i];
}

double dot(std::size_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double dot_g2(std::size_t n, const double* x, const double* y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[2 * i] * y[i];
    return acc;
}

double sum(std::size_t n, const double* x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sum_sq_diff(std::size_t n, const double* a, const double* b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double sum_abs_diff(std::size_t n, const double* a, const double* b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
    return acc;
}

void scale(std::size_t n, double a, double* x) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void lerp_airlight(std::size_t n, const double* j, const double* t, double a, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = j[i] * t[i] + a * (1.0 - t[i]);
}

void leaky_relu_fwd(std::size_t n, const double* x, double slope, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] >= 0.0 ? x[i] : slope * x[i];
}

void leaky_relu_bwd(std::size_t n, const double* x, const double* dy, double slope, double* dx) {
    for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * (x[i] >= 0.0 ? 1.0 : slope);
}

void affine(std::size_t n, const double* x, double mean, double scale, double shift, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = (x[i] - mean) * scale + shift;
}

}  // namespace desmoke::kernels::scalar
