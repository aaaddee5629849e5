// AVX2/FMA variants of the split-complex kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; dispatch.cpp guards it behind a cpuid check.

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include "bq/kernels.hpp"

namespace bq::kern {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
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

double dot3_avx2(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

std::complex<double> cdotc_avx2(const double* are, const double* aim, const double* bre,
                                const double* bim, std::size_t n) {
    __m256d rr = _mm256_setzero_pd();
    __m256d ii = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ar = _mm256_loadu_pd(are + i);
        const __m256d ai = _mm256_loadu_pd(aim + i);
        const __m256d br = _mm256_loadu_pd(bre + i);
        const __m256d bi = _mm256_loadu_pd(bim + i);
        rr = _mm256_fmadd_pd(ar, br, rr);
        rr = _mm256_fmadd_pd(ai, bi, rr);
        ii = _mm256_fmadd_pd(ar, bi, ii);
        ii = _mm256_fnmadd_pd(ai, br, ii);
    }
    double re = hsum(rr), im = hsum(ii);
    for (; i < n; ++i) {
        re += are[i] * bre[i] + aim[i] * bim[i];
        im += are[i] * bim[i] - aim[i] * bre[i];
    }
    return {re, im};
}

double abs2_cdot_avx2(const double* are, const double* aim, const double* bre,
                      const double* bim, std::size_t n) {
    __m256d rr = _mm256_setzero_pd();
    __m256d ii = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ar = _mm256_loadu_pd(are + i);
        const __m256d ai = _mm256_loadu_pd(aim + i);
        const __m256d br = _mm256_loadu_pd(bre + i);
        const __m256d bi = _mm256_loadu_pd(bim + i);
        rr = _mm256_fmadd_pd(ar, br, rr);
        rr = _mm256_fnmadd_pd(ai, bi, rr);
        ii = _mm256_fmadd_pd(ar, bi, ii);
        ii = _mm256_fmadd_pd(ai, br, ii);
    }
    double re = hsum(rr), im = hsum(ii);
    for (; i < n; ++i) {
        re += are[i] * bre[i] - aim[i] * bim[i];
        im += are[i] * bim[i] + aim[i] * bre[i];
    }
    return re * re + im * im;
}

void axpy_creal_avx2(double* fre, double* fim, const double* phi, double cre, double cim,
                     std::size_t n) {
    const __m256d vr = _mm256_set1_pd(cre);
    const __m256d vi = _mm256_set1_pd(cim);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d p = _mm256_loadu_pd(phi + i);
        _mm256_storeu_pd(fre + i, _mm256_fmadd_pd(vr, p, _mm256_loadu_pd(fre + i)));
        _mm256_storeu_pd(fim + i, _mm256_fmadd_pd(vi, p, _mm256_loadu_pd(fim + i)));
    }
    for (; i < n; ++i) {
        fre[i] += cre * phi[i];
        fim[i] += cim * phi[i];
    }
}

}  // namespace

const Kernels& avx2() {
    static const Kernels k = {dot_avx2, dot3_avx2, cdotc_avx2, abs2_cdot_avx2,
                              axpy_creal_avx2, "avx2"};
    return k;
}

}  // namespace bq::kern

#endif  // x86
