#pragma once

#include <optional>
#include <span>
#include <vector>

namespace blf {

// A compactly supported piecewise polynomial on a uniform knot grid.
// Piece i lives on [origin + i*h, origin + (i+1)*h) with h = spacing();
// its coefficients are stored in ascending powers of the local variable
// t = x - left knot. The function is identically zero outside
// [support_min, support_max).
//
// This is the exact workhorse representation for B-splines, the
// Battle-Lemarie pair, and the wavelet antiderivative; all algebra on it
// (products, derivatives, moments, inner products) is closed-form.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(double spacing, double origin, std::vector<std::vector<double>> pieces);

    bool empty() const { return pieces_.empty(); }
    double spacing() const { return spacing_; }
    double origin() const { return origin_; }
    std::size_t piece_count() const { return pieces_.size(); }
    int degree() const;
    double support_min() const { return origin_; }
    double support_max() const { return origin_ + spacing_ * static_cast<double>(pieces_.size()); }
    double knot(std::size_t i) const { return origin_ + spacing_ * static_cast<double>(i); }
    const std::vector<double>& piece(std::size_t i) const { return pieces_[i]; }

    double operator()(double x) const;
    void eval_many(std::span<const double> xs, std::span<double> out) const;
    // k-th derivative at x (taken from the right at knots)
    double derivative_at(double x, int k) const;

    PiecewisePoly derivative() const;
    // Antiderivative vanishing at support_min, continuous across the window.
    // Constant equal to integral() to the right of the window (not stored).
    PiecewisePoly antiderivative() const;
    double integral() const;
    double moment(int kappa) const;  // int x^kappa f(x) dx
    double l2_norm() const;
    double sup_bound() const;  // cheap upper bound on sup |f|

    // Taylor coefficients of piece i re-expanded around absolute position c.
    std::vector<double> taylor_at(std::size_t piece_index, double c) const;
    // One-sided limit of the k-th derivative at interior knot i (>0).
    double one_sided(std::size_t knot_index, int k, bool from_left) const;

    PiecewisePoly refined(int factor) const;
    // g with g(x) = f(a*x - b), a > 0. Knot grid rescales accordingly.
    PiecewisePoly precompose_affine(double a, double b) const;
    PiecewisePoly shifted(double b) const { return precompose_affine(1.0, b); }
    PiecewisePoly scaled(double c) const;
    // Drops boundary pieces whose coefficient-based sup bound is below eps.
    PiecewisePoly trimmed(double eps) const;

    // sum_j coeffs[j] * u(x - (k_first + j)*stride); stride must be an
    // integer multiple of u.spacing().
    static PiecewisePoly shift_combination(const PiecewisePoly& u,
                                           std::span<const double> coeffs,
                                           long k_first, double stride);

private:
    double spacing_ = 1.0;
    double origin_ = 0.0;
    std::vector<std::vector<double>> pieces_;
};

// Exact integral of p*q; throws std::invalid_argument if the knot grids are
// incommensurate (no common refinement with small integer factors).
double inner_product(const PiecewisePoly& p, const PiecewisePoly& q);
std::optional<double> try_inner_product(const PiecewisePoly& p, const PiecewisePoly& q);

// a*p + b*q on the common refinement of the two grids.
PiecewisePoly linear_combine(double a, const PiecewisePoly& p, double b,
                             const PiecewisePoly& q);

}  // namespace blf
