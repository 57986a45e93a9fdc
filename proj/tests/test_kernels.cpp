#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "blframe/kernels.hpp"

using namespace blf;

namespace {

std::vector<double> random_vec(std::mt19937& rng, std::size_t n, double lo = -1.0,
                               double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("every available backend matches the scalar reference") {
    std::mt19937 rng(12345);
    const auto& ref = kernels::scalar_table();
    for (const auto* t : kernels::available_tables()) {
        CAPTURE(t->name);
        for (std::size_t n : {0UL, 1UL, 3UL, 4UL, 7UL, 64UL, 1001UL}) {
            const auto a = random_vec(rng, n);
            const auto b = random_vec(rng, n);
            const auto c = random_vec(rng, n);
            const double tol = 1e-13 * (static_cast<double>(n) + 1.0);
            CHECK(t->dot(a.data(), b.data(), n) ==
                  doctest::Approx(ref.dot(a.data(), b.data(), n)).epsilon(tol));
            CHECK(t->dot3(a.data(), b.data(), c.data(), n) ==
                  doctest::Approx(ref.dot3(a.data(), b.data(), c.data(), n)).epsilon(tol));
            CHECK(t->abs_sum(a.data(), n) ==
                  doctest::Approx(ref.abs_sum(a.data(), n)).epsilon(tol));
            CHECK(t->sq_sum(a.data(), n) ==
                  doctest::Approx(ref.sq_sum(a.data(), n)).epsilon(tol));

            for (std::size_t ncoef : {1UL, 2UL, 5UL, 9UL}) {
                const auto coef = random_vec(rng, ncoef);
                std::vector<double> y1(n), y2(n);
                t->horner_many(coef.data(), ncoef, a.data(), y1.data(), n);
                ref.horner_many(coef.data(), ncoef, a.data(), y2.data(), n);
                for (std::size_t i = 0; i < n; ++i)
                    CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("horner evaluates the polynomial") {
    const std::vector<double> coef{1.0, -2.0, 0.5};  // 1 - 2x + x^2/2
    const std::vector<double> xs{-1.0, 0.0, 0.25, 2.0};
    std::vector<double> y(xs.size());
    kernels::horner_many(coef, xs, y);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(y[i] == doctest::Approx(1.0 - 2.0 * xs[i] + 0.5 * xs[i] * xs[i]));
}

TEST_CASE("abs_pow_sum handles general exponents") {
    const std::vector<double> v{-2.0, 0.0, 1.0, 3.0};
    CHECK(kernels::abs_pow_sum(v, 1.0) == doctest::Approx(6.0));
    CHECK(kernels::abs_pow_sum(v, 2.0) == doctest::Approx(14.0));
    CHECK(kernels::abs_pow_sum(v, 0.5) ==
          doctest::Approx(std::sqrt(2.0) + 1.0 + std::sqrt(3.0)));
}

TEST_CASE("active backend is one of the available tables") {
    bool found = false;
    for (const auto* t : kernels::available_tables())
        if (t == &kernels::active()) found = true;
    CHECK(found);
}
