#include "desmoke/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace desmoke::kernels {

namespace {

struct Vtable {
    void (*axpy)(std::size_t, double, const double*, double*);
    void (*axpy_g2)(std::size_t, double, const double*, double*);
    void (*axpy_s2)(std::size_t, double, const double*, double*);
    double (*dot)(std::size_t, const double*, const double*);
    double (*dot_g2)(std::size_t, const double*, const double*);
    double (*sum)(std::size_t, const double*);
    double (*sum_sq_diff)(std::size_t, const double*, const double*);
    double (*sum_abs_diff)(std::size_t, const double*, const double*);
    void (*scale)(std::size_t, double, double*);
    void (*lerp_airlight)(std::size_t, const double*, const double*, double, double*);
    void (*leaky_relu_fwd)(std::size_t, const double*, double, double*);
    void (*leaky_relu_bwd)(std::size_t, const double*, const double*, double, double*);
    void (*affine)(std::size_t, const double*, double, double, double, double*);
};

constexpr Vtable kScalar = {
    scalar::axpy,         scalar::axpy_g2,       scalar::axpy_s2,
    scalar::dot,          scalar::dot_g2,        scalar::sum,
    scalar::sum_sq_diff,  scalar::sum_abs_diff,  scalar::scale,
    scalar::lerp_airlight, scalar::leaky_relu_fwd, scalar::leaky_relu_bwd,
    scalar::affine,
};

#if defined(DESMOKE_HAVE_AVX2)
constexpr Vtable kAvx2 = {
    avx2::axpy,         avx2::axpy_g2,       avx2::axpy_s2,
    avx2::dot,          avx2::dot_g2,        avx2::sum,
    avx2::sum_sq_diff,  avx2::sum_abs_diff,  avx2::scale,
    avx2::lerp_airlight, avx2::leaky_relu_fwd, avx2::leaky_relu_bwd,
    avx2::affine,
};
#endif

bool avx2_supported() {
#if defined(DESMOKE_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    Isa isa;
    const Vtable* vt;

    Dispatch() {
        isa = avx2_supported() ? Isa::avx2 : Isa::scalar;
        if (const char* env = std::getenv("DESMOKE_ISA")) {
            if (std::strcmp(env, "scalar") == 0) isa = Isa::scalar;
            if (std::strcmp(env, "avx2") == 0 && avx2_supported()) isa = Isa::avx2;
        }
        apply();
    }

    void apply() {
#if defined(DESMOKE_HAVE_AVX2)
        vt = isa == Isa::avx2 ? &kAvx2 : &kScalar;
#else
        vt = &kScalar;
#endif
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

}  // namespace

Isa active_isa() { return dispatch().isa; }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_supported())
        throw std::runtime_error("avx2 kernels unavailable on this machine");
    dispatch().isa = isa;
    dispatch().apply();
}

void axpy(std::size_t n, double a, const double* x, double* y) {
    dispatch().vt->axpy(n, a, x, y);
}
void axpy_g2(std::size_t n, double a, const double* x, double* y) {
    dispatch().vt->axpy_g2(n, a, x, y);
}
void axpy_s2(std::size_t n, double a, const double* x, double* y) {
    dispatch().vt->axpy_s2(n, a, x, y);
}
double dot(std::size_t n, const double* x, const double* y) { return dispatch().vt->dot(n, x, y); }
double dot_g2(std::size_t n, const double* x, const double* y) {
    return dispatch().vt->dot_g2(n, x, y);
}
double sum(std::size_t n, const double* x) { return dispatch().vt->sum(n, x); }
double sum_sq_diff(std::size_t n, const double* a, const double* b) {
    return dispatch().vt->sum_sq_diff(n, a, b);
}
double sum_abs_diff(std::size_t n, const double* a, const double* b) {
    return dispatch().vt->sum_abs_diff(n, a, b);
}
void scale(std::size_t n, double a, double* x) { dispatch().vt->scale(n, a, x); }
void lerp_airlight(std::size_t n, const double* j, const double* t, double a, double* out) {
    dispatch().vt->lerp_airlight(n, j, t, a, out);
}
void leaky_relu_fwd(std::size_t n, const double* x, double slope, double* y) {
    dispatch().vt->leaky_relu_fwd(n, x, slope, y);
}
void leaky_relu_bwd(std::size_t n, const double* x, const double* dy, double slope, double* dx) {
    dispatch().vt->leaky_relu_bwd(n, x, dy, slope, dx);
}
void affine(std::size_t n, const double* x, double mean, double scale, double shift, double* y) {
    dispatch().vt->affine(n, x, mean, scale, shift, y);
}

}  // namespace desmoke::kernels
