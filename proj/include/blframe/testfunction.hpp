#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "blframe/piecewise.hpp"

namespace blf {

// Analytically described inputs f for the frame analysis. Every family has
// an exact evaluator; the piecewise families also expose their exact
// polynomial form, the smooth ones their classical derivatives.
class TestFunction {
public:
    enum class Family { Gaussian, DilatedBspline, PolyBump, ModulatedBump, Indicator };

    static TestFunction gaussian(double center, double width);
    // B_m(scale*x - shift), scale > 0
    static TestFunction dilated_bspline(int order, double scale, double shift);
    // ((4 (x-a)(b-x) / (b-a)^2)^degree on [a, b]
    static TestFunction poly_bump(int degree, double a, double b);
    // cos(freq (x - midpoint)) * poly_bump(4) window on [a, b]
    static TestFunction modulated_bump(double freq, double a, double b);
    static TestFunction indicator(double a, double b);

    static TestFunction parse(const std::string& spec);  // "gaussian:0,1" etc.

    Family family() const { return family_; }
    std::string describe() const;

    double operator()(double x) const;
    // k-th classical derivative; throws std::invalid_argument beyond
    // max_weak_order (k = 0 is the function itself)
    double derivative(double x, int k) const;
    // largest k with f in W^k_p (piecewise-defined derivatives allowed)
    int max_weak_order() const;
    // largest k with f^(k) continuous everywhere
    int smoothness() const;

    bool compact_support() const;
    // exact support for compact families, center +- 12 widths for gaussians
    double support_min() const;
    double support_max() const;
    std::vector<double> breakpoints() const;
    // smallest length scale of variation (drives quadrature refinement)
    double feature_scale() const;

    std::optional<std::complex<double>> fourier(double xi) const;
    const PiecewisePoly* piecewise() const;  // null for non-polynomial families

    double l1_bound() const;       // upper bound on int |f|
    double l1_tail() const;        // int |f| outside [support_min, support_max]
    double sup_bound() const;
    // sampled sup of |f^(k)| with parabolic refinement at the peak
    double deriv_sup(int k) const;

    TestFunction dilated(int m) const;  // f(2^m x)
    TestFunction scaled(double alpha) const;
    double amplitude() const { return amp_; }

private:
    Family family_ = Family::Gaussian;
    double p0_ = 0.0, p1_ = 1.0, p2_ = 0.0;  // family parameters
    int ip_ = 0;                             // integer parameter (spline/bump order)
    double amp_ = 1.0;
    mutable std::optional<PiecewisePoly> pp_;      // lazily built exact form
    mutable std::optional<PiecewisePoly> win_pp_;  // modulated bump window

    double eval_base(double x) const;
    const PiecewisePoly* ensure_pp() const;
    const PiecewisePoly* ensure_pp_window() const;
};

}  // namespace blf
