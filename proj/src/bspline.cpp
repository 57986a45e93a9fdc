#include "blframe/bspline.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace blf::bspline {

namespace {

PiecewisePoly build_piecewise(int m) {
    if (m == 0) return {1.0, 0.0, {{1.0}}};
    const PiecewisePoly prev = build_piecewise(m - 1);
    // B_m(x) = A(x) - A(x-1) with A the running antiderivative of B_{m-1};
    // A equals 0 left of the window and 1 right of it.
    const PiecewisePoly A = prev.antiderivative();
    const auto np = prev.piece_count();  // = m
    std::vector<std::vector<double>> pieces(np + 1);
    for (std::size_t i = 0; i <= np; ++i) {
        std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
        if (i < np) {
            const auto& a = A.piece(i);
            for (std::size_t k = 0; k < a.size(); ++k) c[k] += a[k];
        } else {
            c[0] += 1.0;  // A complete to the right
        }
        if (i >= 1) {
            const auto& a = A.piece(i - 1);
            for (std::size_t k = 0; k < a.size(); ++k) c[k] -= a[k];
        }
        pieces[i] = std::move(c);
    }
    return {1.0, 0.0, std::move(pieces)};
}

constexpr int kMaxOrder = 24;

}  // namespace

const PiecewisePoly& piecewise(int m) {
    if (m < 0) throw std::invalid_argument("bspline: order must be >= 0");
    if (m > kMaxOrder) throw std::invalid_argument("bspline: order too large");
    static std::vector<PiecewisePoly> cache(kMaxOrder + 1);
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    if (cache[static_cast<std::size_t>(m)].empty())
        cache[static_cast<std::size_t>(m)] = build_piecewise(m);
    return cache[static_cast<std::size_t>(m)];
}

double eval(int m, double x) { return piecewise(m)(x); }

std::complex<double> fourier(int m, double xi) {
    if (m < 0) throw std::invalid_argument("bspline: order must be >= 0");
    const double u = 0.5 * xi;
    double sinc;
    if (std::fabs(u) < 1e-4) {
        const double u2 = u * u;
        sinc = 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    } else {
        sinc = std::sin(u) / u;
    }
    const double mag = std::pow(sinc, m + 1);
    const double phase = -u * (m + 1);
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

double autocorr_coeff(int n, int j) {
    if (std::abs(j) > n) return 0.0;
    const PiecewisePoly& b = piecewise(n);
    // B_n(x+j) = B_n(1*x - (-j))
    return inner_product(b, b.precompose_affine(1.0, static_cast<double>(-j)));
}

double autocorr_symbol(int n, double xi) {
    if (n < 0) throw std::invalid_argument("bspline: order must be >= 0");
    double s = autocorr_coeff(n, 0);
    for (int j = 1; j <= n; ++j) s += 2.0 * autocorr_coeff(n, j) * std::cos(j * xi);
    return s;
}

long double eval_ld(int m, long double x) {
    if (m == 0) return (x >= 0.0L && x < 1.0L) ? 1.0L : 0.0L;
    if (x <= 0.0L || x >= static_cast<long double>(m + 1)) return 0.0L;
    return (x * eval_ld(m - 1, x) + (static_cast<long double>(m + 1) - x) * eval_ld(m - 1, x - 1.0L)) /
           static_cast<long double>(m);
}

}  // namespace blf::bspline
