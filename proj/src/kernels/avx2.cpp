// AVX2 + FMA variants. This file is compiled with -mavx2 -mfma and must not
// include headers whose inline functions are shared with the rest of the
// library (Eigen in particular), otherwise the linker could pick an AVX2
// instantiation for code that runs on any x86-64 CPU.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace sjsdm::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(x) with Cody-Waite reduction and a degree-13 Taylor polynomial on
// |r| <= ln2/2; relative error stays within a couple of ulps of std::exp.
inline __m256d exp_pd(__m256d x) {
    const __m256d max_arg = _mm256_set1_pd(709.0);
    const __m256d min_arg = _mm256_set1_pd(-708.39);
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

    const __m256d too_small = _mm256_cmp_pd(x, min_arg, _CMP_LT_OQ);
    const __m256d too_large = _mm256_cmp_pd(x, max_arg, _CMP_GT_OQ);
    const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, min_arg), max_arg);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, xc);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // 1/k! for k = 13 .. 0
    static constexpr double inv_fact[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
        1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
        1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
        1.0,                1.0};
    __m256d p = _mm256_set1_pd(inv_fact[0]);
    for (int k = 1; k < 14; ++k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(inv_fact[k]));

    const __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i bits = _mm256_cvtepi32_epi64(ni);
    bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
    bits = _mm256_slli_epi64(bits, 52);
    __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));

    result = _mm256_blendv_pd(result, _mm256_setzero_pd(), too_small);
    result = _mm256_blendv_pd(result, _mm256_set1_pd(HUGE_VAL), too_large);
    return result;
}

inline __m256d distance4(const double* xs, const double* ys, __m256d x0, __m256d y0) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs), x0);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys), y0);
    return _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void distance_row(const double* xs, const double* ys, double x0, double y0, double* out,
                  std::size_t n) {
    const __m256d vx = _mm256_set1_pd(x0);
    const __m256d vy = _mm256_set1_pd(y0);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) _mm256_storeu_pd(out + j, distance4(xs + j, ys + j, vx, vy));
    for (; j < n; ++j) {
        const double dx = xs[j] - x0;
        const double dy = ys[j] - y0;
        out[j] = std::sqrt(dx * dx + dy * dy);
    }
}

void exp_decay_row(const double* xs, const double* ys, double x0, double y0, double phi,
                   double* out, std::size_t n) {
    const __m256d vx = _mm256_set1_pd(x0);
    const __m256d vy = _mm256_set1_pd(y0);
    const __m256d neg_phi = _mm256_set1_pd(-phi);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d d = distance4(xs + j, ys + j, vx, vy);
        _mm256_storeu_pd(out + j, exp_pd(_mm256_mul_pd(neg_phi, d)));
    }
    for (; j < n; ++j) {
        const double dx = xs[j] - x0;
        const double dy = ys[j] - y0;
        out[j] = std::exp(-phi * std::sqrt(dx * dx + dy * dy));
    }
}

}  // namespace sjsdm::kernels::avx2
