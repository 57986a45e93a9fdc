#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "blframe/bspline.hpp"
#include "blframe/coefficients.hpp"
#include "blframe/norms.hpp"

using namespace blf;

TEST_CASE("test function families evaluate and differentiate") {
    const TestFunction g = TestFunction::gaussian(1.0, 2.0);
    CHECK(g(1.0) == doctest::Approx(1.0));
    CHECK(g.derivative(1.0, 1) == doctest::Approx(0.0));
    // finite-difference check of the analytic derivatives
    for (int k = 1; k <= 3; ++k) {
        const double h = 1e-5;
        const double fd = (g.derivative(2.3 + h, k - 1) - g.derivative(2.3 - h, k - 1)) / (2 * h);
        CHECK(g.derivative(2.3, k) == doctest::Approx(fd).epsilon(1e-7));
    }

    const TestFunction b = TestFunction::dilated_bspline(3, 2.0, 1.0);
    CHECK(b(1.0) == doctest::Approx(bspline::eval(3, 1.0)));
    CHECK(b.support_min() == doctest::Approx(0.5));
    CHECK(b.support_max() == doctest::Approx(2.5));

    const TestFunction m = TestFunction::modulated_bump(9.5, -1.0, 1.0);
    for (int k = 1; k <= 3; ++k) {
        const double h = 1e-5;
        const double fd = (m.derivative(0.21 + h, k - 1) - m.derivative(0.21 - h, k - 1)) / (2 * h);
        CHECK(m.derivative(0.21, k) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK_THROWS_AS((void)TestFunction::indicator(0, 1).derivative(0.5, 1),
                    std::invalid_argument);

    // parsing round-trip
    const TestFunction p = TestFunction::parse("polybump:6,-1,1");
    CHECK(p(0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)TestFunction::parse("nope:1"), std::invalid_argument);
    CHECK_THROWS_AS((void)TestFunction::parse("gaussian:1"), std::invalid_argument);

    // dilation and scaling
    const TestFunction g2 = g.dilated(3).scaled(2.0);
    CHECK(g2(0.5) == doctest::Approx(2.0 * g(4.0)));
}

TEST_CASE("pairing anchors on the square-wave system") {
    const SplineSystem haar = SplineSystem::build(0);
    const TestFunction f = TestFunction::indicator(0, 1);
    CHECK(pair(f, haar, MemberKind::Oversampled, {0, 0}) == doctest::Approx(0.0));
    CHECK(pair(f, haar, MemberKind::Oversampled, {0, 1}) == doctest::Approx(0.5));
    CHECK(pair(f, haar, MemberKind::Base, {0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("quadrature pairing is stable under panel refinement") {
    const SplineSystem sys = SplineSystem::build(1);
    const TestFunction g = TestFunction::gaussian(0.0, 1.0);
    const double a = pair(g, sys, MemberKind::Dyadic, {2, 3});
    const double b = pair(g, sys, MemberKind::Dyadic, {2, 3}, {.refine = 2});
    CHECK(std::fabs(a - b) <= 1e-8 * std::max(1.0, std::fabs(a)));
    // misaligned breakpoints take the panel-splitting path and stay exact
    const TestFunction shifted = TestFunction::dilated_bspline(2, 1.0, 0.3);
    const double c = pair(shifted, sys, MemberKind::Dyadic, {1, 0});
    const double d = pair(shifted, sys, MemberKind::Dyadic, {1, 0}, {.refine = 3});
    CHECK(std::fabs(c - d) <= 1e-12);
}

TEST_CASE("wavelet rows annihilate the scale-zero spline space") {
    // f in V_0 => 2^j (f, psi~_{j, 2 mu}) = 0 for j >= 0
    for (int n : {1, 2}) {
        const SplineSystem sys = SplineSystem::build(n);
        const TestFunction f = TestFunction::dilated_bspline(n, 1.0, -1.0);
        for (int j = 0; j <= 3; ++j) {
            for (long mu = -4; mu <= 4; ++mu) {
                const double v = pair(f, sys, MemberKind::Oversampled, {j, 2 * mu});
                CHECK(std::fabs(std::ldexp(v, j)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("coefficient table anchors for the indicator") {
    const SplineSystem haar = SplineSystem::build(0);
    const TestFunction f = TestFunction::indicator(0, 1);
    const FrameCoefficients fc = frame_coefficients(f, haar, 12, 1e-12);
    CHECK(fc.value(-1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fc.value(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fc.value(0, -1) == doctest::Approx(0.5).epsilon(1e-12));
    // interior coefficients vanish (mean-zero member inside the support)
    CHECK(std::fabs(fc.value(3, 3)) <= 1e-12);
    for (const auto& row : fc.rows)
        for (double v : row.values) CHECK(v >= 0.0);
}

TEST_CASE("homogeneity: coefficients scale with |alpha|") {
    const SplineSystem sys = SplineSystem::build(1);
    const TestFunction f = TestFunction::gaussian(0.2, 0.7);
    const FrameCoefficients a = frame_coefficients(f, sys, 4, 1e-10);
    const FrameCoefficients b = frame_coefficients(f.scaled(-2.5), sys, 4, 1e-10);
    for (int j = -1; j <= 4; ++j) {
        const auto& ra = a.row(j);
        for (std::size_t i = 0; i < ra.values.size(); ++i) {
            const long mu = ra.mu_first + static_cast<long>(i);
            CHECK(b.value(j, mu) == doctest::Approx(2.5 * ra.values[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("window sufficiency: first omitted coefficients sit under the tail bound") {
    const SplineSystem sys = SplineSystem::build(2);
    const TestFunction f = TestFunction::gaussian(0.0, 1.0);
    const double tol = 1e-8;
    const FrameCoefficients fc = frame_coefficients(f, sys, 5, tol);
    for (int j = -1; j <= 5; ++j) {
        const auto& row = fc.row(j);
        if (row.values.empty()) continue;
        for (const long mu : {row.mu_first - 1, row.mu_last() + 1}) {
            double s;
            if (j == -1) {
                s = std::fabs(pair(f, sys, MemberKind::Oversampled, {-1, mu}));
            } else {
                const double lo = std::fabs(pair(f, sys, MemberKind::Oversampled, {j, 2 * mu}));
                const double hi =
                    std::fabs(pair(f, sys, MemberKind::Oversampled, {j, 2 * mu + 1}));
                s = std::ldexp(lo + hi, j);
            }
            CHECK(s <= 10.0 * fc.tail_bound);
        }
    }
}

TEST_CASE("scale consistency under dyadic dilation of the input") {
    // s_{j,mu}(f(2.)) = s_{j-1,mu}(f) for j >= 1
    const SplineSystem sys = SplineSystem::build(1);
    const TestFunction f = TestFunction::gaussian(0.1, 0.8);
    const FrameCoefficients base = frame_coefficients(f, sys, 5, 1e-10);
    const FrameCoefficients dil = frame_coefficients(f.dilated(1), sys, 6, 1e-10);
    for (int j = 1; j <= 5; ++j) {
        const auto& r = base.row(j - 1);
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            const long mu = r.mu_first + static_cast<long>(i);
            if (r.values[i] < 1e-9) continue;
            CHECK(dil.value(j, mu) == doctest::Approx(r.values[i]).epsilon(1e-8));
        }
    }
}

TEST_CASE("CSV export is deterministic and carries the header") {
    const SplineSystem sys = SplineSystem::build(1);
    const TestFunction f = TestFunction::gaussian(0.0, 1.0);
    const FrameCoefficients fc = frame_coefficients(f, sys, 3, 1e-10);
    std::ostringstream a, b;
    fc.write_csv(a);
    frame_coefficients(f, sys, 3, 1e-10).write_csv(b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("# n=1 j_max=3 tol=") == 0);
    CHECK(a.str().find("j,mu,value\n") != std::string::npos);
}
