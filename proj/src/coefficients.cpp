#include "blframe/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace blf {

namespace {

// Effective tau-window of the unit member at scale j: full support clipped to
// the radius where the property (III) envelope certifies pairings below
// tol / 2^{j+5}.
std::pair<double, double> member_window(const TestFunction& f, const SplineSystem& sys,
                                        const PiecewisePoly& U, int j, double tol) {
    double t_lo = U.support_min(), t_hi = U.support_max();
    const DecayFit& dec = sys.decay();
    if (!dec.compact && dec.gamma > 0 && tol > 0) {
        const double big =
            std::max(10.0, dec.C * std::max(f.l1_bound(), 1e-30) * std::ldexp(32.0, j + 1) / tol);
        const double d = std::log(big) / dec.gamma + (sys.order() + 1);
        t_lo = std::max(t_lo, -d);
        t_hi = std::min(t_hi, d);
    }
    return {t_lo, t_hi};
}

}  // namespace

ScaleRow oversampled_row(const TestFunction& f, const SplineSystem& sys, int j,
                         double tol, const PairOptions& opt) {
    if (j < -1) throw std::invalid_argument("oversampled_row: j < -1");
    const PiecewisePoly& U = j == -1 ? sys.scaling_pp() : sys.wavelet_pp();
    const double hu = U.spacing();
    const int jj = std::max(j, 0);
    const auto [t_lo, t_hi] = member_window(f, sys, U, jj, tol);
    const double a = std::ldexp(1.0, jj);
    const long nu_first = static_cast<long>(std::ceil((a * f.support_min() - t_hi) / hu));
    const long nu_last = static_cast<long>(std::floor((a * f.support_max() - t_lo) / hu));
    ScaleRow row;
    row.mu_first = nu_first;
    if (nu_last < nu_first) return row;
    row.values = pair_row(f, U, jj, nu_first, nu_last - nu_first + 1, opt);
    const double weight = std::ldexp(1.0, jj);
    for (auto& v : row.values) v *= weight;
    return row;
}

FrameCoefficients frame_coefficients(const TestFunction& f, const SplineSystem& sys,
                                     int j_max, double tol, const PairOptions& opt) {
    if (j_max < -1) throw std::invalid_argument("frame_coefficients: j_max must be >= -1");
    FrameCoefficients table;
    table.order = sys.order();
    table.j_max = j_max;
    table.tol = tol;
    table.rows.reserve(static_cast<std::size_t>(j_max + 2));

    {
        // base scale: s_{-1,mu} = |(f, Psi(.-mu))|
        ScaleRow raw = oversampled_row(f, sys, -1, tol, opt);
        for (auto& v : raw.values) v = std::fabs(v);
        table.rows.push_back(std::move(raw));
    }
    for (int j = 0; j <= j_max; ++j) {
        ScaleRow raw = oversampled_row(f, sys, j, tol, opt);
        ScaleRow srow;
        srow.mu_first = raw.mu_first >= 0 ? raw.mu_first / 2 : (raw.mu_first - 1) / 2;
        const long mu_last = raw.mu_last() >= 0 ? raw.mu_last() / 2 : (raw.mu_last() - 1) / 2;
        if (mu_last >= srow.mu_first) {
            srow.values.resize(static_cast<std::size_t>(mu_last - srow.mu_first + 1));
            for (long mu = srow.mu_first; mu <= mu_last; ++mu)
                srow.values[static_cast<std::size_t>(mu - srow.mu_first)] =
                    std::fabs(raw.at(2 * mu)) + std::fabs(raw.at(2 * mu + 1));
        }
        table.rows.push_back(std::move(srow));
    }

    // certified bound on anything omitted: the window criterion keeps every
    // in-envelope coefficient above tol/32, plus the mass of f beyond its
    // effective support (gaussian truncation)
    table.tail_bound = tol + std::ldexp(sys.decay().C * f.l1_tail(), j_max + 1);
    return table;
}

void FrameCoefficients::write_csv(std::ostream& os) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", tol);
    os << "# n=" << order << " j_max=" << j_max << " tol=" << buf << "\n";
    os << "j,mu,value\n";
    for (int j = -1; j <= j_max; ++j) {
        const ScaleRow& r = row(j);
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", r.values[i]);
            os << j << "," << (r.mu_first + static_cast<long>(i)) << "," << buf << "\n";
        }
    }
}

}  // namespace blf
