#include "desmoke/kernels.hpp"

#if defined(DESMOKE_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>

namespace desmoke::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sw = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

// Even-index lanes of two consecutive vectors: {x[0],x[2],x[4],x[6]}.
inline __m256d gather_even(const double* x) {
    __m256d a = _mm256_loadu_pd(x);      // x0 x1 x2 x3
    __m256d b = _mm256_loadu_pd(x + 4);  // x4 x5 x6 x7
    __m256d lo = _mm256_unpacklo_pd(a, b);  // x0 x4 x2 x6
    return _mm256_permute4x64_pd(lo, 0b11011000);  // x0 x2 x4 x6
}

}  // namespace

void axpy(std::size_t n, double a, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void axpy_g2(std::size_t n, double a, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    // gather_even reads x[2i..2i+7]; stop one element early so the last
    // odd slot x[2n-1] (which the caller need not own) is never touched.
    for (; i + 5 <= n; i += 4) {
        __m256d xv = gather_even(x + 2 * i);
        __m256d yv = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, xv, yv));
    }
    for (; i < n; ++i) y[i] += a * x[2 * i];
}

void axpy_s2(std::size_t n, double a, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    // writes y[2i..2i+7]; the caller only owns through y[2n-2].
    for (; i + 5 <= n; i += 4) {
        __m256d xv = _mm256_mul_pd(av, _mm256_loadu_pd(x + i));
        // Interleave the products back into the even slots of y[2i..2i+7].
        __m256d y0 = _mm256_loadu_pd(y + 2 * i);
        __m256d y1 = _mm256_loadu_pd(y + 2 * i + 4);
        __m256d xs = _mm256_permute4x64_pd(xv, 0b11011000);  // x0 x2 x1 x3
        __m256d zero = _mm256_setzero_pd();
        __m256d add0 = _mm256_unpacklo_pd(xs, zero);  // x0 0 x1 0
        __m256d add1 = _mm256_unpackhi_pd(xs, zero);  // x2 0 x3 0
        _mm256_storeu_pd(y + 2 * i, _mm256_add_pd(y0, add0));
        _mm256_storeu_pd(y + 2 * i + 4, _mm256_add_pd(y1, add1));
    }
    for (; i < n; ++i) y[2 * i] += a * x[i];
}

double dot(std::size_t n, const double* x, const double* y) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

double dot_g2(std::size_t n, const double* x, const double* y) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 5 <= n; i += 4) {
        acc = _mm256_fmadd_pd(gather_even(x + 2 * i), _mm256_loadu_pd(y + i), acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += x[2 * i] * y[i];
    return r;
}

double sum(std::size_t n, const double* x) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double r = hsum(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

double sum_sq_diff(std::size_t n, const double* a, const double* b) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double r = hsum(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

double sum_abs_diff(std::size_t n, const double* a, const double* b) {
    const __m256d signmask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_add_pd(acc, _mm256_andnot_pd(signmask, d));
    }
    double r = hsum(acc);
    for (; i < n; ++i) r += std::fabs(a[i] - b[i]);
    return r;
}

void scale(std::size_t n, double a, double* x) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) x[i] *= a;
}

void lerp_airlight(std::size_t n, const double* j, const double* t, double a, double* out) {
    const __m256d av = _mm256_set1_pd(a);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d tv = _mm256_loadu_pd(t + i);
        __m256d jv = _mm256_loadu_pd(j + i);
        __m256d veil = _mm256_mul_pd(av, _mm256_sub_pd(one, tv));
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(jv, tv, veil));
    }
    for (; i < n; ++i) out[i] = j[i] * t[i] + a * (1.0 - t[i]);
}

void leaky_relu_fwd(std::size_t n, const double* x, double slope, double* y) {
    const __m256d sv = _mm256_set1_pd(slope);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d neg = _mm256_mul_pd(sv, xv);
        __m256d mask = _mm256_cmp_pd(xv, zero, _CMP_GE_OQ);
        _mm256_storeu_pd(y + i, _mm256_blendv_pd(neg, xv, mask));
    }
    for (; i < n; ++i) y[i] = x[i] >= 0.0 ? x[i] : slope * x[i];
}

void leaky_relu_bwd(std::size_t n, const double* x, const double* dy, double slope, double* dx) {
    const __m256d sv = _mm256_set1_pd(slope);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d mask = _mm256_cmp_pd(xv, zero, _CMP_GE_OQ);
        __m256d g = _mm256_blendv_pd(sv, one, mask);
        _mm256_storeu_pd(dx + i, _mm256_mul_pd(_mm256_loadu_pd(dy + i), g));
    }
    for (; i < n; ++i) dx[i] = dy[i] * (x[i] >= 0.0 ? 1.0 : slope);
}

void affine(std::size_t n, const double* x, double mean, double scale, double shift, double* y) {
    const __m256d mv = _mm256_set1_pd(mean);
    const __m256d sv = _mm256_set1_pd(scale);
    const __m256d bv = _mm256_set1_pd(shift);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_sub_pd(_mm256_loadu_pd(x + i), mv);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(xv, sv, bv));
    }
    for (; i < n; ++i) y[i] = (x[i] - mean) * scale + shift;
}

}  // namespace desmoke::kernels::avx2

#endif  // DESMOKE_HAVE_AVX2
