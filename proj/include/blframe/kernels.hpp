#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace blf::kernels {

// Data-parallel inner loops used by the quadrature, evaluation and norm
// sweeps. Every entry point has a scalar reference implementation plus
// SIMD variants (AVX2 on x86-64, NEON on aarch64) selected once at runtime.
// The variants are equivalence-tested against the scalar reference.
struct Table {
    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // sum_i a[i] * b[i] * c[i]
    double (*dot3)(const double* a, const double* b, const double* c, std::size_t n);
    // sum_i |x[i]|
    double (*abs_sum)(const double* x, std::size_t n);
    // sum_i x[i]^2
    double (*sq_sum)(const double* x, std::size_t n);
    // y[i] = polynomial with coefficients coef[0..ncoef-1] (ascending powers)
    // evaluated at x[i], by Horner's rule
    void (*horner_many)(const double* coef, std::size_t ncoef, const double* x,
                        double* y, std::size_t n);
    const char* name;
};

// Active backend; resolved once from CPU features, overridable with
// BLFRAME_KERNELS=scalar|avx2|neon.
const Table& active();

const Table& scalar_table();

// All backends usable on this machine (for equivalence tests).
std::span<const Table* const> available_tables();

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline double dot3(std::span<const double> a, std::span<const double> b,
                   std::span<const double> c) {
    return active().dot3(a.data(), b.data(), c.data(), a.size());
}
inline double abs_sum(std::span<const double> x) { return active().abs_sum(x.data(), x.size()); }
inline double sq_sum(std::span<const double> x) { return active().sq_sum(x.data(), x.size()); }
inline void horner_many(std::span<const double> coef, std::span<const double> x,
                        std::span<double> y) {
    active().horner_many(coef.data(), coef.size(), x.data(), y.data(), x.size());
}

// sum_i |x[i]|^p; p = 1 and p = 2 take the vectorized paths.
double abs_pow_sum(std::span<const double> x, double p);

}  // namespace blf::kernels
