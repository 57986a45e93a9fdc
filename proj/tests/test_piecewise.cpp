#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "blframe/piecewise.hpp"

using namespace blf;

namespace {

PiecewisePoly random_pp(std::mt19937& rng, double spacing, double origin, int npieces,
                        int degree) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<std::vector<double>> pieces(static_cast<std::size_t>(npieces));
    for (auto& p : pieces) {
        p.resize(static_cast<std::size_t>(degree) + 1);
        for (auto& c : p) c = dist(rng);
    }
    return {spacing, origin, std::move(pieces)};
}

}  // namespace

TEST_CASE("evaluation respects the window and local coefficients") {
    PiecewisePoly f{0.5, 1.0, {{1.0, 2.0}, {3.0}}};
    CHECK(f(0.9) == 0.0);
    CHECK(f(1.0) == doctest::Approx(1.0));
    CHECK(f(1.25) == doctest::Approx(1.5));
    CHECK(f(1.75) == doctest::Approx(3.0));
    CHECK(f(2.0) == 0.0);
    CHECK(f(100.0) == 0.0);
}

TEST_CASE("derivative and antiderivative are mutually inverse") {
    std::mt19937 rng(7);
    const PiecewisePoly f = random_pp(rng, 0.5, -1.0, 6, 3);
    const PiecewisePoly F = f.antiderivative();
    const PiecewisePoly back = F.derivative();
    for (double x = -1.0; x < 2.0; x += 0.0137)
        CHECK(back(x) == doctest::Approx(f(x)).epsilon(1e-12));
    CHECK(F(-1.0) == doctest::Approx(0.0));
    CHECK(F(2.0 - 1e-12) == doctest::Approx(f.integral()).epsilon(1e-9));
}

TEST_CASE("moment matches quadrature") {
    std::mt19937 rng(11);
    const PiecewisePoly f = random_pp(rng, 1.0, 3.0, 4, 2);
    for (int k = 0; k <= 3; ++k) {
        double q = 0.0;
        const int n = 40000;
        for (int i = 0; i < n; ++i) {
            const double x = 3.0 + 4.0 * (i + 0.5) / n;
            q += std::pow(x, k) * f(x) * 4.0 / n;
        }
        CHECK(f.moment(k) == doctest::Approx(q).epsilon(1e-6));
    }
}

TEST_CASE("inner product is exact, bilinear and symmetric") {
    std::mt19937 rng(3);
    const PiecewisePoly p = random_pp(rng, 0.5, 0.0, 8, 3);
    const PiecewisePoly q = random_pp(rng, 0.25, 1.0, 6, 2);
    const double pq = inner_product(p, q);
    CHECK(pq == doctest::Approx(inner_product(q, p)));
    // quadrature oracle on the overlap
    double s = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double x = 1.0 + 1.5 * (i + 0.5) / n;
        s += p(x) * q(x) * 1.5 / n;
    }
    CHECK(pq == doctest::Approx(s).epsilon(1e-7));
    // bilinearity
    const PiecewisePoly p2 = p.scaled(2.5);
    CHECK(inner_product(p2, q) == doctest::Approx(2.5 * pq));
}

TEST_CASE("incommensurate grids are rejected but reported via try_") {
    PiecewisePoly p{1.0, 0.0, {{1.0}}};
    PiecewisePoly q{1.0 / 3.14159, 0.0, {{1.0}}};
    CHECK(!try_inner_product(p, q).has_value());
    CHECK_THROWS_AS((void)inner_product(p, q), std::invalid_argument);
}

TEST_CASE("refined and precompose preserve values") {
    std::mt19937 rng(5);
    const PiecewisePoly f = random_pp(rng, 0.5, -2.0, 7, 4);
    const PiecewisePoly r = f.refined(3);
    const PiecewisePoly g = f.precompose_affine(4.0, -1.5);  // g(x) = f(4x + 1.5)
    for (double x = -2.5; x < 2.5; x += 0.01) {
        CHECK(r(x) == doctest::Approx(f(x)).epsilon(1e-12));
        CHECK(g(x) == doctest::Approx(f(4.0 * x + 1.5)).epsilon(1e-12));
    }
}

TEST_CASE("taylor re-expansion reproduces the piece") {
    std::mt19937 rng(9);
    const PiecewisePoly f = random_pp(rng, 1.0, 0.0, 3, 4);
    const auto t = f.taylor_at(1, 1.75);
    for (double dx = -0.7; dx < 0.25; dx += 0.05) {
        double v = 0.0, xp = 1.0;
        for (double c : t) {
            v += c * xp;
            xp *= dx;
        }
        CHECK(v == doctest::Approx(f(1.75 + dx)).epsilon(1e-11));
    }
}

TEST_CASE("one_sided limits detect jumps") {
    PiecewisePoly f{1.0, 0.0, {{0.0, 1.0}, {2.0, -1.0}}};  // t on [0,1), 2-t on [1,2)
    CHECK(f.one_sided(1, 0, true) == doctest::Approx(1.0));
    CHECK(f.one_sided(1, 0, false) == doctest::Approx(2.0));
    CHECK(f.one_sided(1, 1, true) == doctest::Approx(1.0));
    CHECK(f.one_sided(1, 1, false) == doctest::Approx(-1.0));
}

TEST_CASE("linear_combine adds on the common refinement") {
    std::mt19937 rng(13);
    const PiecewisePoly p = random_pp(rng, 0.5, 0.0, 4, 2);
    const PiecewisePoly q = random_pp(rng, 0.25, 0.5, 4, 3);
    const PiecewisePoly c = linear_combine(2.0, p, -1.0, q);
    for (double x = -0.5; x < 2.5; x += 0.013)
        CHECK(c(x) == doctest::Approx(2.0 * p(x) - q(x)).epsilon(1e-12));
}

TEST_CASE("shift_combination assembles translated copies") {
    PiecewisePoly hat{1.0, 0.0, {{0.0, 1.0}, {2.0, -1.0}}};
    const std::vector<double> coeffs{1.0, -0.5, 0.25};
    const PiecewisePoly s = PiecewisePoly::shift_combination(hat, coeffs, -1, 1.0);
    for (double x = -2.0; x < 4.0; x += 0.017) {
        const double expect = hat(x + 1.0) - 0.5 * hat(x) + 0.25 * hat(x - 1.0);
        CHECK(s(x) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("trimmed drops negligible boundary pieces only") {
    PiecewisePoly f{1.0, 0.0, {{1e-18}, {1.0}, {1e-18}, {1e-18}}};
    const PiecewisePoly t = f.trimmed(1e-12);
    CHECK(t.piece_count() == 1);
    CHECK(t.support_min() == doctest::Approx(1.0));
    CHECK(t(1.5) == doctest::Approx(1.0));
}
