#include "blframe/checks.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "blframe/bspline.hpp"
#include "blframe/mra.hpp"

namespace blf::checks {

ConstructionReport construction_report(const SplineSystem& sys, int scale_min, int scale_max,
                                       int mu_halfwidth, int nu_halfwidth) {
    ConstructionReport rep;
    rep.order = sys.order();
    const int n = sys.order();
    rep.truncation_tail = sys.truncation_tail();

    // --- inter/intrascale orthonormality over the tested window
    {
        const double finest = sys.wavelet_pp().spacing() * std::exp2(-scale_max);
        std::vector<PiecewisePoly> base(static_cast<std::size_t>(scale_max - scale_min + 1));
        for (int j = scale_min; j <= scale_max; ++j) {
            PiecewisePoly m = sys.member_pp(MemberKind::Dyadic, {j, 0});
            const int factor = std::max(1, static_cast<int>(std::lround(m.spacing() / finest)));
            base[static_cast<std::size_t>(j - scale_min)] = m.refined(factor);
        }
        double worst = 0.0;
        for (int j = scale_min; j <= scale_max; ++j) {
            const PiecewisePoly& pj = base[static_cast<std::size_t>(j - scale_min)];
            const double shift_j = j == -1 ? 1.0 : std::exp2(-j);
            for (int k = j; k <= scale_max; ++k) {
                const PiecewisePoly& pk = base[static_cast<std::size_t>(k - scale_min)];
                const double shift_k = k == -1 ? 1.0 : std::exp2(-k);
                for (long mu = -mu_halfwidth; mu <= mu_halfwidth; ++mu) {
                    for (long nu = mu - nu_halfwidth; nu <= mu + nu_halfwidth; ++nu) {
                        if (j == k && nu < mu) continue;  // symmetric half
                        const double ip = inner_product(
                            pj.shifted(static_cast<double>(mu) * shift_j),
                            pk.shifted(static_cast<double>(nu) * shift_k));
                        const double expect = (j == k && mu == nu) ? std::exp2(-j) : 0.0;
                        worst = std::max(worst, std::fabs(ip - expect));
                    }
                }
            }
        }
        rep.ortho_residual = worst;
    }

    // --- vanishing moments of the wavelet
    for (double v : sys.moments(true, n)) rep.moment_max = std::max(rep.moment_max, std::fabs(v));

    // --- global C^{n-1} smoothness at the knots
    if (n >= 1) {
        double worst = 0.0;
        auto scan = [&](const PiecewisePoly& f) {
            for (int k = 0; k <= n - 1; ++k)
                for (std::size_t i = 1; i < f.piece_count(); ++i)
                    worst = std::max(worst, std::fabs(f.one_sided(i, k, true) -
                                                      f.one_sided(i, k, false)));
        };
        scan(sys.wavelet_pp());
        scan(sys.scaling_pp());
        rep.knot_mismatch = worst;
    }

    // --- decay envelope on the signal region of the samples
    {
        const DecayFit& dec = sys.decay();
        rep.gamma = dec.gamma;
        double excess = 0.0;
        auto scan = [&](const PiecewisePoly& f) {
            double vmax = 0.0;
            for (std::size_t i = 0; i < f.piece_count(); ++i)
                vmax = std::max(vmax, std::fabs(f(f.knot(i) + 0.5 * f.spacing())));
            for (std::size_t i = 0; i < f.piece_count(); ++i) {
                const double x = f.knot(i) + 0.5 * f.spacing();
                const double v = std::fabs(f(x));
                if (v < 1e-13 * vmax) continue;
                excess = std::max(excess, v * std::exp(dec.gamma * std::fabs(x)) / dec.C - 1.0);
            }
        };
        scan(sys.wavelet_pp());
        scan(sys.scaling_pp());
        rep.envelope_excess = std::max(0.0, excess);
    }

    // --- membership in the B-spline scale spaces (Psi in V_0, psi in V_1)
    {
        const long K = sys.trunc() + 2;
        const auto rs = mra::shift_basis_least_squares(sys.scaling_pp(), bspline::piecewise(n),
                                                       1.0, -K, K, 1e-12);
        const PiecewisePoly half = bspline::piecewise(n).precompose_affine(2.0, 0.0);
        const auto rw =
            mra::shift_basis_least_squares(sys.wavelet_pp(), half, 0.5, -2 * K, 2 * K, 1e-12);
        rep.mra_residual = std::max(rs.residual, rw.residual);
    }
    return rep;
}

bool ConstructionReport::pass() const {
    return ortho_residual <= 1e-7 && moment_max <= 1e-8 && knot_mismatch <= 1e-7 &&
           gamma > 0.0 && envelope_excess <= 1e-6 &&
           mra_residual <= std::max(10.0 * truncation_tail, 1e-8);
}

nlohmann::json ConstructionReport::to_json() const {
    return nlohmann::json{{"order", order},
                          {"ortho_residual", ortho_residual},
                          {"moment_max", moment_max},
                          {"knot_mismatch", knot_mismatch},
                          {"gamma", gamma},
                          {"envelope_excess", envelope_excess},
                          {"mra_residual", mra_residual},
                          {"truncation_tail", truncation_tail},
                          {"pass", pass()}};
}

double haar_anchor(const SplineSystem& sys, int npoints) {
    auto href = [](double x) {
        if (x >= 0.0 && x < 0.5) return 1.0;
        if (x >= 0.5 && x < 1.0) return -1.0;
        return 0.0;
    };
    double best = std::numeric_limits<double>::infinity();
    for (int shift = -2; shift <= 2; ++shift) {
        for (int sign = -1; sign <= 1; sign += 2) {
            double worst = 0.0;
            for (int i = 0; i < npoints; ++i) {
                const double x = -1.5 + 4.0 * i / (npoints - 1);
                worst = std::max(worst,
                                 std::fabs(sign * sys.eval_member(MemberKind::Wavelet, {0, 0},
                                                                  x + shift) -
                                           href(x)));
            }
            best = std::min(best, worst);
        }
    }
    return best;
}

PieceCoefficientReport piece_coefficient_report(const SplineSystem& sys, bool wavelet,
                                                long mu_halfwidth) {
    PieceCoefficientReport rep;
    rep.envelope_margin = std::numeric_limits<double>::infinity();
    const int n = sys.order();
    const DecayFit& dec = sys.decay();
    const PiecewisePoly& f0 = wavelet ? sys.wavelet_pp() : sys.scaling_pp();
    const PiecewisePoly half = f0.spacing() == 0.5 ? f0 : f0.refined(2);

    auto piece_at = [&](double left_knot) -> std::optional<std::size_t> {
        const double pos = (left_knot - half.origin()) / half.spacing();
        const long i = std::lround(pos);
        if (std::fabs(pos - static_cast<double>(i)) > 1e-9 || i < 0 ||
            i >= static_cast<long>(half.piece_count()))
            return std::nullopt;
        return static_cast<std::size_t>(i);
    };
    auto padded = [&](std::optional<std::size_t> idx, double center) {
        std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
        if (idx) {
            const auto t = half.taylor_at(*idx, center);
            for (std::size_t k = 0; k < t.size() && k < out.size(); ++k) out[k] = t[k];
        }
        return out;
    };

    for (long mu = -mu_halfwidth; mu <= mu_halfwidth; ++mu) {
        const double c = 0.5 * static_cast<double>(mu);
        // pieces left and right of the shared knot mu/2, both expanded there
        const auto left = padded(piece_at(c - 0.5), c);
        const auto right = padded(piece_at(c), c);
        for (int k = 0; k <= n - 1; ++k)
            rep.nonleading_mismatch =
                std::max(rep.nonleading_mismatch, std::fabs(left[static_cast<std::size_t>(k)] -
                                                            right[static_cast<std::size_t>(k)]));
        const double lead = std::fabs(right[static_cast<std::size_t>(n)]);
        const double bound = 4.0 * dec.C * std::exp(0.5 * dec.gamma) *
                             std::exp(-0.5 * dec.gamma * std::fabs(static_cast<double>(mu)));
        if (lead > 0.0) rep.envelope_margin = std::min(rep.envelope_margin, bound / lead);
    }
    return rep;
}

}  // namespace blf::checks
