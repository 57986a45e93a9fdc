// NEON variants for aarch64, where 128-bit SIMD is baseline.

#include "blframe/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstring>

namespace blf::kernels::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_neon(const double* a, const double* b, const double* c, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t ab = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vfmaq_f64(acc, ab, vld1q_f64(c + i));
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

double abs_sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vabsq_f64(vld1q_f64(x + i)));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] < 0 ? -x[i] : x[i];
    return s;
}

double sq_sum_neon(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

void horner_many_neon(const double* coef, std::size_t ncoef, const double* x,
                      double* y, std::size_t n) {
    if (ncoef == 0) {
        std::memset(y, 0, n * sizeof(double));
        return;
    }
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t xv = vld1q_f64(x + i);
        float64x2_t v = vdupq_n_f64(coef[ncoef - 1]);
        for (std::size_t k = ncoef - 1; k-- > 0;)
            v = vfmaq_f64(vdupq_n_f64(coef[k]), v, xv);
        vst1q_f64(y + i, v);
    }
    for (; i < n; ++i) {
        double v = coef[ncoef - 1];
        for (std::size_t k = ncoef - 1; k-- > 0;) v = v * x[i] + coef[k];
        y[i] = v;
    }
}

constexpr Table kNeon{dot_neon, dot3_neon, abs_sum_neon, sq_sum_neon,
                      horner_many_neon, "neon"};

}  // namespace

const Table& neon_table() { return kNeon; }

}  // namespace blf::kernels::detail

#endif  // aarch64
