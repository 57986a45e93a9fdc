#pragma once

#include <vector>

#include "blframe/blsystem.hpp"
#include "blframe/pairing.hpp"
#include "blframe/testfunction.hpp"

namespace blf::mra {

// Symmetric Gram matrix of the oversampled members psi~_{j,l} for
// l in [l_first, l_first + dim); exact piecewise inner products.
struct GramMatrix {
    long l_first = 0;
    std::size_t dim = 0;
    std::vector<double> a;  // row-major
    double at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

GramMatrix gram_matrix(const SplineSystem& sys, int j, long l_lo, long l_hi);

struct LsqResult {
    long l_first = 0;
    std::vector<double> coeffs;
    double residual = 0.0;            // L2 norm of target - sum q_l psi~_{0,l}
    bool conditioning_warning = false;
};

// Ridge-regularized normal equations for min ||target - sum q_l psi~_{0,l}||_2
// over the window l in [l_lo, l_hi]. The oversampled Gram is nearly singular
// (the family is redundant), hence the ridge.
LsqResult frame_least_squares(const SplineSystem& sys, const PiecewisePoly& target,
                              long l_lo, long l_hi, double ridge = 1e-10);

// Least squares in an integer-shift basis {u(. - k stride)}; used for the
// scale-space membership checks.
LsqResult shift_basis_least_squares(const PiecewisePoly& target, const PiecewisePoly& u,
                                    double stride, long k_lo, long k_hi,
                                    double ridge = 0.0);

// B_{2n+1}^{(n+1)}(2x): the (n+1)-fold alternating-difference combination of
// half-scale B_n shifts.
PiecewisePoly bspline_derivative_target(int n);

struct Projection {
    std::vector<double> grid;
    std::vector<double> values;
    long mu_first = 0;
    std::vector<double> coeffs;  // 2^N (f, Psi_{N,mu})
};

// E_N f = sum_mu 2^N (f, Psi(2^N . - mu)) Psi(2^N . - mu) on a reporting grid.
Projection projection_EN(const TestFunction& f, const SplineSystem& sys, int N,
                         std::span<const double> grid);

}  // namespace blf::mra
