#include "blframe/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <vector>

namespace blf::kernels {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3_scalar(const double* a, const double* b, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

double abs_sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
    return s;
}

double sq_sum_scalar(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

void horner_many_scalar(const double* coef, std::size_t ncoef, const double* x,
                        double* y, std::size_t n) {
    if (ncoef == 0) {
        std::memset(y, 0, n * sizeof(double));
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double v = coef[ncoef - 1];
        for (std::size_t k = ncoef - 1; k-- > 0;) v = v * x[i] + coef[k];
        y[i] = v;
    }
}

constexpr Table kScalar{dot_scalar, dot3_scalar, abs_sum_scalar, sq_sum_scalar,
                        horner_many_scalar, "scalar"};

}  // namespace

const Table& scalar_table() { return kScalar; }

#if defined(__x86_64__) || defined(_M_X64)
namespace detail {
const Table& avx2_table();  // kernels_avx2.cpp
}
#endif
#if defined(__aarch64__)
namespace detail {
const Table& neon_table();  // kernels_neon.cpp
}
#endif

namespace {

std::vector<const Table*> build_available() {
    std::vector<const Table*> t{&kScalar};
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        t.push_back(&detail::avx2_table());
#endif
#if defined(__aarch64__)
    t.push_back(&detail::neon_table());
#endif
    return t;
}

const Table* resolve() {
    static const std::vector<const Table*> avail = build_available();
    if (const char* env = std::getenv("BLFRAME_KERNELS")) {
        for (const Table* t : avail)
            if (std::strcmp(t->name, env) == 0) return t;
        // Unknown or unsupported name: fall through to the default pick.
    }
    return avail.back();
}

}  // namespace

const Table& active() {
    static const Table* t = resolve();
    return *t;
}

std::span<const Table* const> available_tables() {
    static const std::vector<const Table*> avail = build_available();
    return {avail.data(), avail.size()};
}

double abs_pow_sum(std::span<const double> x, double p) {
    if (p == 1.0) return abs_sum(x);
    if (p == 2.0) return sq_sum(x);
    double s = 0.0;
    for (double v : x) {
        if (v != 0.0) s += std::pow(std::fabs(v), p);
    }
    return s;
}

}  // namespace blf::kernels
