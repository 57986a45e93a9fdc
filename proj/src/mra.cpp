#include "blframe/mra.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "blframe/bspline.hpp"

namespace blf::mra {

GramMatrix gram_matrix(const SplineSystem& sys, int j, long l_lo, long l_hi) {
    if (l_hi < l_lo) throw std::invalid_argument("gram_matrix: empty window");
    GramMatrix g;
    g.l_first = l_lo;
    g.dim = static_cast<std::size_t>(l_hi - l_lo + 1);
    g.a.assign(g.dim * g.dim, 0.0);
    std::vector<PiecewisePoly> members(g.dim);
    for (std::size_t i = 0; i < g.dim; ++i)
        members[i] = sys.member_pp(MemberKind::Oversampled,
                                   {j, l_lo + static_cast<long>(i)});
    for (std::size_t r = 0; r < g.dim; ++r)
        for (std::size_t c = r; c < g.dim; ++c) {
            const double v = inner_product(members[r], members[c]);
            g.a[r * g.dim + c] = v;
            g.a[c * g.dim + r] = v;
        }
    return g;
}

namespace {

LsqResult solve_normal_equations(const std::vector<PiecewisePoly>& basis, long l_first,
                                 const PiecewisePoly& target, double ridge) {
    const std::size_t dim = basis.size();
    Eigen::MatrixXd G(dim, dim);
    Eigen::VectorXd b(dim);
    for (std::size_t r = 0; r < dim; ++r) {
        b(static_cast<long>(r)) = inner_product(target, basis[r]);
        for (std::size_t c = r; c < dim; ++c) {
            const double v = inner_product(basis[r], basis[c]);
            G(static_cast<long>(r), static_cast<long>(c)) = v;
            G(static_cast<long>(c), static_cast<long>(r)) = v;
        }
    }
    Eigen::MatrixXd A = G;
    for (std::size_t i = 0; i < dim; ++i) A(static_cast<long>(i), static_cast<long>(i)) += ridge;

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    LsqResult res;
    res.l_first = l_first;
    res.conditioning_warning = ldlt.info() != Eigen::Success;
    if (!res.conditioning_warning) {
        const double dmin = ldlt.vectorD().minCoeff();
        const double dmax = ldlt.vectorD().maxCoeff();
        if (!(dmin > 0.0) || dmin < 1e3 * ridge || dmin < 1e-14 * dmax)
            res.conditioning_warning = true;
    }
    Eigen::VectorXd q = ldlt.solve(b);
    // polish toward the unregularized normal equations; the ridge-stabilized
    // factorization serves as preconditioner, so well-conditioned modes reach
    // machine accuracy while near-null modes stay damped
    for (int it = 0; it < 12; ++it) {
        const Eigen::VectorXd r = b - G * q;
        if (r.norm() <= 1e-15 * std::max(1.0, b.norm())) break;
        q += ldlt.solve(r);
    }
    res.coeffs.assign(q.data(), q.data() + dim);
    // exact residual through the piecewise difference (the quadratic form
    // cancels catastrophically once the fit is good)
    PiecewisePoly diff = target;
    for (std::size_t i = 0; i < dim; ++i)
        diff = linear_combine(1.0, diff, -res.coeffs[i], basis[i]);
    res.residual = diff.l2_norm();
    return res;
}

}  // namespace

LsqResult frame_least_squares(const SplineSystem& sys, const PiecewisePoly& target,
                              long l_lo, long l_hi, double ridge) {
    if (l_hi < l_lo) throw std::invalid_argument("frame_least_squares: empty window");
    std::vector<PiecewisePoly> basis(static_cast<std::size_t>(l_hi - l_lo + 1));
    for (std::size_t i = 0; i < basis.size(); ++i)
        basis[i] = sys.member_pp(MemberKind::Oversampled, {0, l_lo + static_cast<long>(i)});
    return solve_normal_equations(basis, l_lo, target, ridge);
}

LsqResult shift_basis_least_squares(const PiecewisePoly& target, const PiecewisePoly& u,
                                    double stride, long k_lo, long k_hi, double ridge) {
    if (k_hi < k_lo) throw std::invalid_argument("shift_basis_least_squares: empty window");
    std::vector<PiecewisePoly> basis(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (std::size_t i = 0; i < basis.size(); ++i)
        basis[i] = u.shifted(static_cast<double>(k_lo + static_cast<long>(i)) * stride);
    return solve_normal_equations(basis, k_lo, target, ridge);
}

PiecewisePoly bspline_derivative_target(int n) {
    PiecewisePoly d = bspline::piecewise(2 * n + 1);
    for (int i = 0; i <= n; ++i) d = d.derivative();
    return d.precompose_affine(2.0, 0.0);
}

Projection projection_EN(const TestFunction& f, const SplineSystem& sys, int N,
                         std::span<const double> grid) {
    if (N < 0) throw std::invalid_argument("projection_EN: N must be >= 0");
    Projection out;
    out.grid.assign(grid.begin(), grid.end());
    out.values.assign(grid.size(), 0.0);

    const PiecewisePoly& Psi = sys.scaling_pp();
    const double a = std::ldexp(1.0, N);
    // window: members overlapping f's support or the reporting grid
    double lo = f.support_min(), hi = f.support_max();
    for (double x : grid) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    const long mu_lo = static_cast<long>(std::ceil(a * lo - Psi.support_max()));
    const long mu_hi = static_cast<long>(std::floor(a * hi - Psi.support_min()));
    out.mu_first = mu_lo;
    if (mu_hi < mu_lo) return out;

    out.coeffs = pair_row(f, Psi, N, mu_lo, mu_hi - mu_lo + 1);
    for (auto& c : out.coeffs) c *= a;

    for (std::size_t i = 0; i < out.grid.size(); ++i) {
        const double ax = a * out.grid[i];
        double s = 0.0;
        for (std::size_t m = 0; m < out.coeffs.size(); ++m)
            s += out.coeffs[m] * Psi(ax - static_cast<double>(mu_lo + static_cast<long>(m)));
        out.values[i] = s;
    }
    return out;
}

}  // namespace blf::mra
