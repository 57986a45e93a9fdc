#pragma once

#include <vector>

#include "blframe/blsystem.hpp"
#include "blframe/testfunction.hpp"

namespace blf {

struct PairOptions {
    int nodes = 0;   // Gauss-Legendre points per panel; 0 -> 2*(order+3)
    int refine = 1;  // extra panel subdivision (for refinement checks)
};

// Pairings (f, U(2^j x - nu * h)) with h = U.spacing(), for nu in
// [nu_first, nu_first + count). Composite Gauss-Legendre on cells bounded by
// the member's knots, with f's breakpoints splitting the affected cells and
// smooth f refined to its feature scale; member piece values are shared
// across all nu. Exact whenever f is piecewise polynomial, since panels then
// never straddle a knot of either factor.
std::vector<double> pair_row(const TestFunction& f, const PiecewisePoly& U, int j,
                             long nu_first, long count, const PairOptions& opt = {});

// Single pairing (f, member); delegates to the exact polynomial path when f
// is itself a piecewise polynomial on a commensurate grid.
double pair(const TestFunction& f, const SplineSystem& sys, MemberKind kind,
            DyadicIndex idx, const PairOptions& opt = {});

}  // namespace blf
