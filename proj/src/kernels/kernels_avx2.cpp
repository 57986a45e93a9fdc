// AVX2 + FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma;
// only ever called after a runtime cpuid check in kernels.cpp.

#include "blframe/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstring>

namespace blf::kernels::detail {

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

double abs_sum_avx2(const double* x, std::size_t n) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(x + i), mask));
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] < 0 ? -x[i] : x[i];
    return s;
}

double sq_sum_avx2(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

void horner_many_avx2(const double* coef, std::size_t ncoef, const double* x,
                      double* y, std::size_t n) {
    if (ncoef == 0) {
        std::memset(y, 0, n * sizeof(double));
        return;
    }
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d v = _mm256_set1_pd(coef[ncoef - 1]);
        for (std::size_t k = ncoef - 1; k-- > 0;)
            v = _mm256_fmadd_pd(v, xv, _mm256_set1_pd(coef[k]));
        _mm256_storeu_pd(y + i, v);
    }
    for (; i < n; ++i) {
        double v = coef[ncoef - 1];
        for (std::size_t k = ncoef - 1; k-- > 0;) v = v * x[i] + coef[k];
        y[i] = v;
    }
}

constexpr Table kAvx2{dot_avx2, dot3_avx2, abs_sum_avx2, sq_sum_avx2,
                      horner_many_avx2, "avx2"};

}  // namespace

const Table& avx2_table() { return kAvx2; }

}  // namespace blf::kernels::detail

#endif  // x86-64
