#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "blframe/bspline.hpp"

using namespace blf;

namespace {

constexpr double kPi = 3.14159265358979323846;

// independent oracle: iterated convolution of unit indicators on a fine grid
double conv_oracle(int m, double x) {
    const int res = 2048;  // samples per unit
    const double h = 1.0 / res;
    std::vector<double> cur(res, 1.0);  // B_0 on [0,1)
    for (int k = 1; k <= m; ++k) {
        std::vector<double> nxt((k + 1) * res, 0.0);
        // B_k(t) = int_{t-1}^{t} B_{k-1}; midpoint rule on the grid
        for (std::size_t i = 0; i < nxt.size(); ++i) {
            const double t = (static_cast<double>(i) + 0.5) * h;
            double s = 0.0;
            const long lo = static_cast<long>(std::ceil((t - 1.0) / h - 0.5));
            for (long j = std::max(0L, lo); j < static_cast<long>(cur.size()); ++j) {
                const double y = (static_cast<double>(j) + 0.5) * h;
                if (y > t) break;
                s += cur[static_cast<std::size_t>(j)] * h;
            }
            nxt[i] = s;
        }
        cur = std::move(nxt);
    }
    const long i = std::lround(x / h - 0.5);
    if (i < 0 || i >= static_cast<long>(cur.size())) return 0.0;
    return cur[static_cast<std::size_t>(i)];
}

std::complex<double> fourier_quadrature(int m, double xi) {
    const int n = 200000;
    const double hi = m + 1.0;
    std::complex<double> s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = hi * (i + 0.5) / n;
        s += bspline::eval(m, x) * std::exp(std::complex<double>(0.0, -x * xi)) * (hi / n);
    }
    return s;
}

}  // namespace

TEST_CASE("point values") {
    CHECK(bspline::eval(0, 0.5) == doctest::Approx(1.0));
    CHECK(bspline::eval(0, -0.1) == 0.0);
    CHECK(bspline::eval(0, 1.0) == 0.0);  // right-open support
    CHECK(bspline::eval(1, 1.0) == doctest::Approx(1.0));
    // frozen from the iterated-convolution oracle
    const double oracle = conv_oracle(3, 2.0);
    CHECK(oracle == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
    CHECK(bspline::eval(3, 2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK_THROWS_AS((void)bspline::eval(-1, 0.0), std::invalid_argument);
}

TEST_CASE("piecewise form: exact pieces, support, derivative identity") {
    const PiecewisePoly& b0 = bspline::piecewise(0);
    CHECK(b0.piece_count() == 1);
    CHECK(b0.piece(0)[0] == doctest::Approx(1.0));

    const PiecewisePoly& b1 = bspline::piecewise(1);
    CHECK(b1(0.3) == doctest::Approx(0.3));
    CHECK(b1(1.7) == doctest::Approx(0.3));

    // d/dx B_3 = B_2(x) - B_2(x-1) off knots
    const PiecewisePoly d3 = bspline::piecewise(3).derivative();
    for (int i = 0; i < 100; ++i) {
        const double x = -0.5 + 5.0 * (i + 0.37) / 100.0;
        CHECK(d3(x) == doctest::Approx(bspline::eval(2, x) - bspline::eval(2, x - 1.0))
                           .epsilon(1e-13));
    }
}

TEST_CASE("partition of unity up to order 6") {
    for (int m = 0; m <= 6; ++m) {
        for (int i = 0; i <= 50; ++i) {
            const double x = i / 50.0;
            double s = 0.0;
            for (int k = -m; k <= m + 1; ++k) s += bspline::eval(m, x - k);
            CHECK(std::fabs(s - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("recursion consistency against quadrature") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-0.5, 6.5);
    for (int m = 1; m <= 5; ++m) {
        for (int trial = 0; trial < 20; ++trial) {
            const double x = dist(rng);
            double q = 0.0;
            const int n = 4000;
            for (int i = 0; i < n; ++i) q += bspline::eval(m - 1, x - (i + 0.5) / n) / n;
            CHECK(bspline::eval(m, x) == doctest::Approx(q).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("fourier transform: anchors and quadrature consistency") {
    for (int m = 0; m <= 5; ++m) CHECK(bspline::fourier(m, 0.0) == std::complex<double>(1.0, 0.0));
    CHECK(std::abs(bspline::fourier(0, kPi)) == doctest::Approx(2.0 / kPi));
    CHECK(std::abs(bspline::fourier(1, 2.0 * kPi)) == doctest::Approx(0.0).epsilon(1e-15));

    for (int m = 0; m <= 5; ++m) {
        for (double xi : {-50.0, -7.3, -0.9, 1e-7, 0.4, 3.7, 21.0, 50.0}) {
            const auto exact = bspline::fourier(m, xi);
            const auto quad = fourier_quadrature(m, xi);
            CHECK(std::abs(exact - quad) <= 1e-8);
        }
    }
}

TEST_CASE("autocorrelation coefficients match the odd-order spline values") {
    // int B_n(x) B_n(x+j) dx = B_{2n+1}(n+1+j)
    for (int n = 0; n <= 5; ++n)
        for (int j = -n; j <= n; ++j)
            CHECK(bspline::autocorr_coeff(n, j) ==
                  doctest::Approx(bspline::eval(2 * n + 1, n + 1 + j)).epsilon(1e-13));
    CHECK(bspline::autocorr_coeff(1, 2) == 0.0);
}

TEST_CASE("autocorrelation symbol: anchors and lattice-sum oracle") {
    for (double xi : {0.0, 0.3, 2.0, 4.0}) CHECK(bspline::autocorr_symbol(0, xi) == doctest::Approx(1.0));
    CHECK(bspline::autocorr_symbol(1, 0.0) == doctest::Approx(1.0));

    // truncated lattice sum of |B_1^(pi + 2 pi k)|^2 at tolerance 1e-12
    double lattice = 0.0;
    for (long k = -20000; k <= 20000; ++k) {
        const double xi = kPi + 2.0 * kPi * static_cast<double>(k);
        lattice += std::norm(bspline::fourier(1, xi));
    }
    CHECK(lattice == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(bspline::autocorr_symbol(1, kPi) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("symbol stays positive on [0, 2pi] for n <= 5") {
    for (int n = 0; n <= 5; ++n) {
        double lo = 1e300;
        for (int i = 0; i < 4096; ++i)
            lo = std::min(lo, bspline::autocorr_symbol(n, 2.0 * kPi * i / 4096.0));
        CHECK(lo > 1e-4);
    }
}

TEST_CASE("inner products of splines") {
    const PiecewisePoly& b0 = bspline::piecewise(0);
    const PiecewisePoly& b1 = bspline::piecewise(1);
    CHECK(inner_product(b0, b0) == doctest::Approx(1.0));
    CHECK(inner_product(b1, b1) == doctest::Approx(2.0 / 3.0));
    CHECK(inner_product(b1, b1.shifted(1.0)) == doctest::Approx(1.0 / 6.0));
    // fine-grid oracle for (B_1, B_1)
    double q = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = 2.0 * (i + 0.5) / n;
        q += bspline::eval(1, x) * bspline::eval(1, x) * 2.0 / n;
    }
    CHECK(q == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}
