#pragma once

#include <cstddef>

// Data-parallel inner loops shared by the metric, synthesis, and network
// code. Every kernel has a scalar reference implementation and, on x86-64
// with AVX2+FMA, a vectorized variant selected once at startup. The two
// are equivalence-tested in tests/test_kernels.cpp; results may differ by
// rounding (FMA, reassociated partial sums) but not beyond ~1e-12 relative.
namespace desmoke::kernels {

enum class Isa { scalar, avx2 };

// Currently dispatched instruction set.
Isa active_isa();

// Override dispatch (tests, or DESMOKE_ISA=scalar / =avx2 in the
// environment before first use). Throws if the requested set is
// unavailable on this machine.
void force_isa(Isa isa);

// y[i] += a * x[i]
void axpy(std::size_t n, double a, const double* x, double* y);

// y[i] += a * x[2i]     (stride-2 gather; conv stride 2)
void axpy_g2(std::size_t n, double a, const double* x, double* y);

// y[2i] += a * x[i]     (stride-2 scatter; transposed conv)
void axpy_s2(std::size_t n, double a, const double* x, double* y);

// sum_i x[i] * y[i]
double dot(std::size_t n, const double* x, const double* y);

// sum_i x[2i] * y[i]
double dot_g2(std::size_t n, const double* x, const double* y);

double sum(std::size_t n, const double* x);

// sum_i (a[i] - b[i])^2
double sum_sq_diff(std::size_t n, const double* a, const double* b);

// sum_i |a[i] - b[i]|
double sum_abs_diff(std::size_t n, const double* a, const double* b);

void scale(std::size_t n, double a, double* x);

// out[i] = j[i] * t[i] + a * (1 - t[i])   (scattering model composite)
void lerp_airlight(std::size_t n, const double* j, const double* t, double a, double* out);

// y[i] = x[i] >= 0 ? x[i] : slope * x[i]
void leaky_relu_fwd(std::size_t n, const double* x, double slope, double* y);

// dx[i] = dy[i] * (x[i] >= 0 ? 1 : slope)
void leaky_relu_bwd(std::size_t n, const double* x, const double* dy, double slope, double* dx);

// y[i] = (x[i] - mean) * scale + shift   (batch-norm style affine)
void affine(std::size_t n, const double* x, double mean, double scale, double shift, double* y);

namespace scalar {
void axpy(std::size_t n, double a, const double* x, double* y);
void axpy_g2(std::size_t n, double a, const double* x, double* y);
void axpy_s2(std::size_t n, double a, const double* x, double* y);
double dot(std::size_t n, const double* x, const double* y);
double dot_g2(std::size_t n, const double* x, const double* y);
double sum(std::size_t n, const double* x);
double sum_sq_diff(std::size_t n, const double* a, const double* b);
double sum_abs_diff(std::size_t n, const double* a, const double* b);
void scale(std::size_t n, double a, double* x);
void lerp_airlight(std::size_t n, const double* j, const double* t, double a, double* out);
void leaky_relu_fwd(std::size_t n, const double* x, double slope, double* y);
void leaky_relu_bwd(std::size_t n, const double* x, const double* dy, double slope, double* dx);
void affine(std::size_t n, const double* x, double mean, double scale, double shift, double* y);
}  // namespace scalar

#if defined(DESMOKE_HAVE_AVX2)
namespace avx2 {
void axpy(std::size_t n, double a, const double* x, double* y);
void axpy_g2(std::size_t n, double a, const double* x, double* y);
void axpy_s2(std::size_t n, double a, const double* x, double* y);
double dot(std::size_t n, const double* x, const double* y);
double dot_g2(std::size_t n, const double* x, const double* y);
double sum(std::size_t n, const double* x);
double sum_sq_diff(std::size_t n, const double* a, const double* b);
double sum_abs_diff(std::size_t n, const double* a, const double* b);
void scale(std::size_t n, double a, double* x);
void lerp_airlight(std::size_t n, const double* j, const double* t, double a, double* out);
void leaky_relu_fwd(std::size_t n, const double* x, double slope, double* y);
void leaky_relu_bwd(std::size_t n, const double* x, const double* dy, double slope, double* dx);
void affine(std::size_t n, const double* x, double mean, double scale, double shift, double* y);
}  // namespace avx2
#endif

}  // namespace desmoke::kernels
