#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "blframe/errors.hpp"
#include "blframe/norms.hpp"

using namespace blf;

namespace {

CoefficientTable single_entry(int j, long mu, double v, int j_max) {
    CoefficientTable t;
    t.rows.resize(static_cast<std::size_t>(j_max) + 2);
    auto& r = t.rows[static_cast<std::size_t>(j + 1)];
    r.mu_first = mu;
    r.values = {v};
    return t;
}

CoefficientTable random_table(std::mt19937& rng, int j_max, int width) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    CoefficientTable t;
    t.rows.resize(static_cast<std::size_t>(j_max) + 2);
    for (auto& r : t.rows) {
        r.mu_first = -width;
        r.values.resize(static_cast<std::size_t>(2 * width + 1));
        for (auto& v : r.values) v = dist(rng);
    }
    return t;
}

}  // namespace

TEST_CASE("range classification") {
    // frame interval (-1.5, 2) at n=1, p=q=2
    {
        const auto info = validate_range({.s = 0.5, .p = 2, .q = 2, .space = Space::Besov, .order = 1});
        REQUIRE(info.frame_s.has_value());
        CHECK(info.frame_s->lo == doctest::Approx(-1.5));
        CHECK(info.frame_s->hi == doctest::Approx(2.0));
        CHECK(info.frame_s->str() == "(-1.5, 2)");
        REQUIRE(info.basis_s.has_value());
        CHECK(info.basis_s->lo == doctest::Approx(-1.5));
        CHECK(info.basis_s->hi == doctest::Approx(1.5));
        CHECK(info.cls == RangeClass::Both);
    }
    // beyond the basis range but inside the frame range
    {
        const auto info = validate_range({.s = 1.7, .p = 2, .q = 2, .space = Space::Besov, .order = 1});
        CHECK(info.cls == RangeClass::FrameValid);
    }
    // p below the frame floor 1/(2(n+1))
    {
        const auto info = validate_range({.s = 0.0, .p = 0.3, .q = 2, .space = Space::Besov, .order = 0});
        CHECK(info.cls == RangeClass::Outside);
        CHECK(!info.frame_s.has_value());
    }
    // Triebel-Lizorkin: q = inf only admissible with p <= 1
    {
        const auto a = validate_range({.s = 0.5, .p = 2, .q = kInf,
                                       .space = Space::TriebelLizorkin, .order = 1});
        CHECK(!a.frame_s.has_value());
        const auto b = validate_range({.s = 0.5, .p = 0.9, .q = kInf,
                                       .space = Space::TriebelLizorkin, .order = 1});
        CHECK(b.frame_s.has_value());
        CHECK(b.cls != RangeClass::Outside);
    }
    // endpoint space needs n >= 1 and p > 1
    CHECK(validate_range({.s = 0, .p = 2, .q = 2, .space = Space::SobolevEndpoint, .order = 0}).cls ==
          RangeClass::Outside);
    CHECK(validate_range({.s = 0, .p = 1, .q = 2, .space = Space::SobolevEndpoint, .order = 1}).cls ==
          RangeClass::Outside);
    CHECK(validate_range({.s = 0, .p = kInf, .q = 2, .space = Space::SobolevEndpoint, .order = 2}).cls ==
          RangeClass::FrameValid);
}

TEST_CASE("sequence norm anchors (b-scale)") {
    for (double s : {-0.7, 0.0, 1.3}) {
        for (double p : {0.5, 1.0, 2.0, kInf}) {
            for (double q : {0.7, 1.0, 2.0, kInf}) {
                NormParams prm{.s = s, .p = p, .q = q, .space = Space::Besov, .order = 1};
                CHECK(seq_norm_besov(single_entry(0, 0, 1.0, 3), prm) == doctest::Approx(1.0));
                const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
                CHECK(seq_norm_besov(single_entry(-1, 0, 1.0, 3), prm) ==
                      doctest::Approx(std::exp2(-(s - ip))));
            }
        }
    }
    // unit entries at (0,0) and (1,0), q = 1 -> 1 + 2^{s - 1/p}
    CoefficientTable t;
    t.rows.resize(4);
    t.rows[1] = {0, {1.0}};
    t.rows[2] = {0, {1.0}};
    NormParams prm{.s = 0.4, .p = 2.0, .q = 1.0, .space = Space::Besov, .order = 0};
    CHECK(seq_norm_besov(t, prm) == doctest::Approx(1.0 + std::exp2(0.4 - 0.5)));
}

TEST_CASE("sequence norm anchors (f-scale)") {
    for (double s : {-0.4, 0.6}) {
        for (double p : {0.8, 2.0}) {
            for (double q : {1.0, 2.5}) {
                NormParams prm{.s = s, .p = p, .q = q,
                               .space = Space::TriebelLizorkin, .order = 0};
                // single entry at scale 1: constant 2^s on an interval of length 1/2
                CHECK(seq_norm_triebel(single_entry(1, 0, 1.0, 3), prm) ==
                      doctest::Approx(std::exp2(s) * std::pow(0.5, 1.0 / p)));
            }
        }
    }
    // two unit entries at scale 0 spanning [0,2): constant 1 regardless of s
    CoefficientTable t;
    t.rows.resize(3);
    t.rows[1] = {0, {1.0, 1.0}};
    NormParams prm{.s = 0.9, .p = 1.7, .q = 2.2, .space = Space::TriebelLizorkin, .order = 0};
    CHECK(seq_norm_triebel(t, prm) == doctest::Approx(std::exp2(1.0 / 1.7)));
    // q = inf: single entry at scale 2
    NormParams prmi{.s = 0.3, .p = 2.0, .q = kInf, .space = Space::TriebelLizorkin, .order = 0};
    CHECK(seq_norm_triebel(single_entry(2, 0, 1.0, 3), prmi) ==
          doctest::Approx(std::exp2(2 * 0.3) * std::pow(0.25, 0.5)));
    CHECK_THROWS_AS((void)seq_norm_triebel(t, {.s = 0, .p = kInf, .q = 2,
                                               .space = Space::TriebelLizorkin, .order = 0}),
                    std::invalid_argument);
}

TEST_CASE("u-triangle inequality on random tables") {
    std::mt19937 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const CoefficientTable a = random_table(rng, 3, 6);
        const CoefficientTable b = random_table(rng, 3, 6);
        CoefficientTable sum = a;
        for (std::size_t r = 0; r < sum.rows.size(); ++r)
            for (std::size_t i = 0; i < sum.rows[r].values.size(); ++i)
                sum.rows[r].values[i] += b.rows[r].values[i];
        for (const Space space : {Space::Besov, Space::TriebelLizorkin}) {
            for (const auto& [p, q] : {std::pair{0.6, 1.4}, {1.3, 0.8}, {2.0, 2.0}}) {
                NormParams prm{.s = 0.3, .p = p, .q = q, .space = space, .order = 1};
                const double u = std::min({p, q, 1.0});
                const double na = seq_norm(a, prm), nb = seq_norm(b, prm),
                             ns = seq_norm(sum, prm);
                CHECK(std::pow(ns, u) <= std::pow(na, u) + std::pow(nb, u) + 1e-9);
            }
        }
    }
}

TEST_CASE("monotonicity in s when all mass sits at scales j >= 0") {
    std::mt19937 rng(202);
    CoefficientTable t = random_table(rng, 4, 5);
    t.rows[0].values.clear();  // nothing at j = -1
    for (auto& r : t.rows)
        for (auto& v : r.values) v = std::fabs(v);
    double prev = -1.0;
    for (double s : {-1.0, -0.3, 0.0, 0.8, 1.6}) {
        NormParams prm{.s = s, .p = 1.5, .q = 2.0, .space = Space::Besov, .order = 1};
        const double v = seq_norm_besov(t, prm);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("frame norm: anchors, homogeneity, compositional contract, range errors") {
    const SplineSystem haar = SplineSystem::build(0);
    const TestFunction f = TestFunction::indicator(0, 1);
    NormParams prm{.s = 0.0, .p = 2.0, .q = 2.0, .space = Space::Besov, .order = 0};

    const FrameNormResult res = frame_norm(f, haar, prm, 12, 1e-12);
    CHECK(res.value == doctest::Approx(std::sqrt(3.0)).epsilon(1e-3));
    // compositional contract: equals the sequence norm of its own table
    CHECK(res.value == seq_norm(CoefficientTable::from_frame(res.coeffs), prm));

    // quasi-norm homogeneity
    const FrameNormResult scaled = frame_norm(f.scaled(-3.0), haar, prm, 12, 1e-12);
    CHECK(scaled.value == doctest::Approx(3.0 * res.value).epsilon(1e-10));

    // zero function
    const FrameNormResult zero = frame_norm(f.scaled(0.0), haar, prm, 12, 1e-12);
    CHECK(zero.value == 0.0);

    // out-of-range error carries the admissible interval
    try {
        const SplineSystem s1 = SplineSystem::build(1);
        (void)frame_norm(TestFunction::gaussian(0, 1), s1,
                         {.s = 3.0, .p = 2.0, .q = 2.0, .space = Space::Besov, .order = 1});
        CHECK(false);
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("(-1.5, 2)") != std::string::npos);
    }
}

TEST_CASE("endpoint sequence norm uses the sup form") {
    CoefficientTable t;
    t.rows.resize(4);
    t.rows[1] = {0, {1.0}};            // j=0
    t.rows[3] = {0, {0.5, 0.5, 0.5}};  // j=2
    NormParams prm{.s = 0, .p = 2.0, .q = kInf, .space = Space::SobolevEndpoint, .order = 1};
    const double expect = std::max(1.0, std::exp2(2.0 * (2 - 0.5)) * std::sqrt(0.75));
    CHECK(seq_norm_sobolev_endpoint(t, prm) == doctest::Approx(expect));
}

TEST_CASE("sobolev reference norm") {
    // B_3, k=2, p=inf: ||B_3||_inf + ||B_3''||_inf = 2/3 + 2
    const TestFunction b3 = TestFunction::dilated_bspline(3, 1.0, 0.0);
    CHECK(sobolev_reference_norm(b3, kInf, 2) == doctest::Approx(2.0 / 3.0 + 2.0).epsilon(1e-9));

    // gaussian, k=2, p=2 against a fine-grid quadrature oracle
    const TestFunction g = TestFunction::gaussian(0.0, 1.0);
    double l2f = 0.0, l2d2 = 0.0;
    const int N = 400000;
    for (int i = 0; i < N; ++i) {
        const double x = -16.0 + 32.0 * (i + 0.5) / N;
        l2f += g(x) * g(x) * 32.0 / N;
        l2d2 += g.derivative(x, 2) * g.derivative(x, 2) * 32.0 / N;
    }
    const double oracle = std::sqrt(l2f) + std::sqrt(l2d2);
    CHECK(sobolev_reference_norm(g, 2.0, 2) == doctest::Approx(oracle).epsilon(1e-8));

    // zero function
    CHECK(sobolev_reference_norm(g.scaled(0.0), 2.0, 2) == 0.0);

    // unsupported derivative order
    CHECK_THROWS_AS((void)sobolev_reference_norm(TestFunction::indicator(0, 1), 2.0, 1),
                    std::invalid_argument);
}

TEST_CASE("shift robustness of the f-norm (calibrated constant)") {
    const SplineSystem sys = SplineSystem::build(1);
    const TestFunction g = TestFunction::gaussian(0.0, 1.0);
    const CoefficientTable w =
        CoefficientTable::from_frame(frame_coefficients(g, sys, 6, 1e-10));
    for (const auto& [p, q] : {std::pair{2.0, 2.0}, {1.0, 1.0}}) {
        NormParams prm{.s = 0.5, .p = p, .q = q, .space = Space::TriebelLizorkin, .order = 1};
        const double r = std::min(p, q) / 2.0;
        const double base = seq_norm_triebel(w, prm);
        const double c1 = seq_norm_triebel(w.shifted(1), prm) / base / std::pow(2.0, 1.0 / r);
        for (long m = 2; m <= 8; ++m) {
            const double cm = seq_norm_triebel(w.shifted(m), prm) / base /
                              std::pow(static_cast<double>(m) + 1.0, 1.0 / r);
            CHECK(cm <= c1 * (1.0 + 1e-9));
        }
    }
}
