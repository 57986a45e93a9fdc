#pragma once

#include <complex>

#include "blframe/piecewise.hpp"

namespace blf::bspline {

// B_m(x), the (m+1)-fold convolution of 1_[0,1); supported on [0, m+1].
double eval(int m, double x);

// Exact piecewise form: integer knots on [0, m+1], degree m.
const PiecewisePoly& piecewise(int m);

// Fourier transform under the convention f^(xi) = int f e^{-i x xi} dx:
// ((1 - e^{-i xi}) / (i xi))^{m+1}, with the analytic limit 1 at xi = 0.
std::complex<double> fourier(int m, double xi);

// a_j = int B_n(x) B_n(x+j) dx, nonzero for |j| <= n.
double autocorr_coeff(int n, int j);

// E_n(xi) = sum_k |B_n^(xi + 2 pi k)|^2, evaluated as the finite
// trigonometric polynomial a_0 + 2 sum_{j=1..n} a_j cos(j xi).
double autocorr_symbol(int n, double xi);

// Cardinal B-spline value by the Cox-de Boor recurrence in long double;
// used where coefficient noise at the 1e-16 level would be amplified.
long double eval_ld(int m, long double x);

}  // namespace blf::bspline
