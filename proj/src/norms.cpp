#include "blframe/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "blframe/errors.hpp"
#include "blframe/kernels.hpp"
#include "blframe/quadrature.hpp"

namespace blf {

namespace {

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }
// 1/p' with 1/p + 1/p' = 1 (kept for p < 1 as well, where it goes negative)
double inv_conj(double p) { return 1.0 - inv(p); }

std::string fmt_g(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string Interval::str() const { return "(" + fmt_g(lo) + ", " + fmt_g(hi) + ")"; }

RangeInfo validate_range(const NormParams& prm) {
    RangeInfo info;
    const int n = prm.order;
    const double p = prm.p, q = prm.q, s = prm.s;
    if (!(p > 0) || !(q > 0)) {
        info.detail = "p and q must be positive";
        return info;
    }
    const double p_floor = 1.0 / (2.0 * (n + 1));

    if (prm.space == Space::SobolevEndpoint) {
        if (n >= 1 && p > 1.0) {
            info.cls = RangeClass::FrameValid;
            info.detail = "endpoint norm admissible (requires n >= 1, 1 < p <= inf)";
        } else {
            info.detail = "endpoint norm requires n >= 1 and 1 < p <= inf";
        }
        return info;
    }

    bool frame_pq = false, basis_pq = false;
    Interval frame_iv, basis_iv;
    if (prm.space == Space::Besov) {
        frame_pq = p > p_floor;
        frame_iv = {inv(p) - 1.0 - n, n + 1.0};
        basis_pq = true;
        basis_iv = {inv(p) - 1.0 - n, n + std::min(inv(p), 1.0)};
        if (!frame_pq)
            info.detail = "frame theorem requires p > 1/(2(n+1)) = " + fmt_g(p_floor);
    } else {
        frame_pq = (p > p_floor && q > p_floor && !std::isinf(p) && !std::isinf(q)) ||
                   (std::isinf(q) && p > p_floor && p <= 1.0);
        frame_iv = {std::max(inv(p), inv(q)) - 1.0 - n, n + 1.0};
        if (std::isinf(p)) {
            basis_pq = false;
        } else if (p > 1.0 && q > 1.0 && !std::isinf(q)) {
            basis_pq = true;
            basis_iv = {std::max(inv(p), inv(q)) - 1.0 - n, n + std::min(inv(p), inv(q))};
        } else if (p <= 1.0 && q > 1.0 && !std::isinf(q) && inv(p) < 1.0 + inv(q)) {
            // the carve-out extending the improved range to small p
            basis_pq = true;
            basis_iv = {std::max(inv(p), inv(q)) - 1.0 - n, n + std::min(inv(p), inv(q))};
        } else {
            basis_pq = true;
            basis_iv = {std::max({inv_conj(p) * -1.0, inv_conj(q) * -1.0, 0.0}) - n,
                        static_cast<double>(n)};
        }
        if (!frame_pq)
            info.detail = std::isinf(p)
                              ? "frame theorem requires p < inf for Triebel-Lizorkin"
                              : "frame theorem requires 1/(2(n+1)) < p,q < inf (q = inf only "
                                "with p <= 1)";
    }

    if (frame_pq) info.frame_s = frame_iv;
    if (basis_pq && basis_iv.nonempty()) info.basis_s = basis_iv;

    const bool in_frame = frame_pq && frame_iv.contains(s);
    const bool in_basis = basis_pq && basis_iv.contains(s);
    if (in_frame && in_basis)
        info.cls = RangeClass::Both;
    else if (in_frame)
        info.cls = RangeClass::FrameValid;
    else if (in_basis)
        info.cls = RangeClass::BasisValid;
    if (info.cls == RangeClass::Outside && info.detail.empty())
        info.detail = "s = " + fmt_g(s) + " outside admissible interval " +
                      (frame_pq ? frame_iv.str() : std::string("(empty)"));
    if (info.cls != RangeClass::Outside) info.detail = "";
    return info;
}

CoefficientTable CoefficientTable::from_frame(const FrameCoefficients& fc) {
    CoefficientTable t;
    t.rows = fc.rows;
    return t;
}

CoefficientTable CoefficientTable::shifted(long m) const {
    CoefficientTable t = *this;
    for (auto& r : t.rows) r.mu_first -= m;
    return t;
}

double seq_norm_besov(const CoefficientTable& w, const NormParams& prm) {
    const double ip = inv(prm.p);
    double acc = 0.0, worst = 0.0;
    for (int j = -1; j <= w.j_max(); ++j) {
        const auto& r = w.row(j);
        if (r.values.empty()) continue;
        double Sj;
        if (std::isinf(prm.p)) {
            Sj = 0.0;
            for (double v : r.values) Sj = std::max(Sj, std::fabs(v));
        } else {
            Sj = std::pow(kernels::abs_pow_sum(r.values, prm.p), ip);
        }
        const double term = std::exp2(j * (prm.s - ip)) * Sj;
        if (std::isinf(prm.q))
            worst = std::max(worst, term);
        else
            acc += std::pow(term, prm.q);
    }
    return std::isinf(prm.q) ? worst : std::pow(acc, 1.0 / prm.q);
}

double seq_norm_triebel(const CoefficientTable& w, const NormParams& prm) {
    if (std::isinf(prm.p))
        throw std::invalid_argument("seq_norm_triebel: p = inf not admissible");
    const int J = std::max(0, w.j_max());
    const bool qinf = std::isinf(prm.q);

    // cell range at the finest scale; the integrand is constant on each cell
    long c_lo = 0, c_hi = 0;
    bool any = false;
    for (int j = -1; j <= w.j_max(); ++j) {
        const auto& r = w.row(j);
        if (r.values.empty()) continue;
        const long span = 1L << (J - std::max(j, 0));
        const long lo = r.mu_first * span;
        const long hi = (r.mu_last() + 1) * span;
        if (!any) {
            c_lo = lo;
            c_hi = hi;
            any = true;
        } else {
            c_lo = std::min(c_lo, lo);
            c_hi = std::max(c_hi, hi);
        }
    }
    if (!any) return 0.0;

    // accumulate the ell_q stack per cell, scale by scale
    std::vector<double> stack(static_cast<std::size_t>(c_hi - c_lo), 0.0);
    for (int j = -1; j <= w.j_max(); ++j) {
        const auto& r = w.row(j);
        if (r.values.empty()) continue;
        const long span = 1L << (J - std::max(j, 0));
        for (std::size_t i = 0; i < r.values.size(); ++i) {
            const double v = std::fabs(r.values[i]);
            if (v == 0.0) continue;
            const double t = std::exp2(j * prm.s) * v;
            const double tq = qinf ? t : std::pow(t, prm.q);
            const long c0 = (r.mu_first + static_cast<long>(i)) * span - c_lo;
            for (long c = c0; c < c0 + span; ++c) {
                auto& a = stack[static_cast<std::size_t>(c)];
                a = qinf ? std::max(a, tq) : a + tq;
            }
        }
    }

    const double cellw = std::exp2(-J);
    const double pq = qinf ? prm.p : prm.p / prm.q;
    double integral = 0.0;
    for (double a : stack)
        if (a > 0.0) integral += cellw * std::pow(a, pq);
    return std::pow(integral, 1.0 / prm.p);
}

double seq_norm_sobolev_endpoint(const CoefficientTable& w, const NormParams& prm) {
    const double ip = inv(prm.p);
    const int n = prm.order;
    double worst = 0.0;
    for (int j = -1; j <= w.j_max(); ++j) {
        const auto& r = w.row(j);
        if (r.values.empty()) continue;
        double Sj;
        if (std::isinf(prm.p)) {
            Sj = 0.0;
            for (double v : r.values) Sj = std::max(Sj, std::fabs(v));
        } else {
            Sj = std::pow(kernels::abs_pow_sum(r.values, prm.p), ip);
        }
        worst = std::max(worst, std::exp2(j * (n + 1 - ip)) * Sj);
    }
    return worst;
}

double seq_norm(const CoefficientTable& w, const NormParams& prm) {
    switch (prm.space) {
        case Space::Besov: return seq_norm_besov(w, prm);
        case Space::TriebelLizorkin: return seq_norm_triebel(w, prm);
        case Space::SobolevEndpoint: return seq_norm_sobolev_endpoint(w, prm);
    }
    return 0.0;
}

namespace {

// Upper bound on int |g| from the coefficient representation.
double l1_bound_pp(const PiecewisePoly& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.piece_count(); ++i) {
        const auto& c = g.piece(i);
        double hp = g.spacing();
        double b = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            b += std::fabs(c[k]) * hp / static_cast<double>(k + 1);
            hp *= g.spacing();
        }
        s += b;
    }
    return s;
}

// Upper bound on int |x g(x)| dx.
double first_abs_moment_pp(const PiecewisePoly& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.piece_count(); ++i) {
        const auto& c = g.piece(i);
        const double xmax = std::max(std::fabs(g.knot(i)), std::fabs(g.knot(i + 1)));
        double hp = g.spacing();
        double b = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            b += std::fabs(c[k]) * hp / static_cast<double>(k + 1);
            hp *= g.spacing();
        }
        s += xmax * b;
    }
    return s;
}

// Certified remainder of the sequence norm beyond j_max, from per-scale
// coefficient bounds and the geometric factors 2^{j(s-(n+1))}; NaN when no
// usable bound applies to f.
double tail_remainder(const TestFunction& f, const SplineSystem& sys,
                      const NormParams& prm, int J) {
    const int n = sys.order();
    const double width = f.support_max() - f.support_min();
    const double ip = inv(prm.p);

    // per-scale bounds: sb = bound on any s_{j,mu}, W = window count bound
    std::vector<double> sb, W;
    const int horizon = 60;
    if (f.max_weak_order() >= n + 1) {
        const double Mf = f.deriv_sup(n + 1);
        const double rho_l1 = l1_bound_pp(sys.antiderivative_rho());
        for (int j = J + 1; j <= J + horizon; ++j) {
            const double beta = std::exp2(-(j + 1.0) * (n + 2.0)) * Mf * rho_l1;
            sb.push_back(2.0 * std::exp2(j) * beta);
            W.push_back(std::exp2(j) * width + 4.0 * (sys.trunc() + n + 2));
        }
    } else if (f.piecewise()) {
        const PiecewisePoly* fp = f.piecewise();
        const double M0 = f.sup_bound();
        const double M1 = fp->derivative().sup_bound();
        const auto njumps = static_cast<double>(f.breakpoints().size());
        const DecayFit& dec = sys.decay();
        const double envelope_l1 = dec.compact
                                       ? l1_bound_pp(sys.wavelet_pp())
                                       : 2.0 * dec.C / std::max(dec.gamma, 1e-6);
        const double c1 = first_abs_moment_pp(sys.wavelet_pp());
        const double mdef = std::fabs(sys.wavelet_pp().moment(0));
        const double wav_width =
            sys.wavelet_pp().support_max() - sys.wavelet_pp().support_min();
        for (int j = J + 1; j <= J + horizon; ++j) {
            const double straddle = 2.0 * M0 * envelope_l1;          // per jump entry
            const double interior = 2.0 * (M1 * std::exp2(-j) * c1 + M0 * mdef);
            const double n_str = njumps * (2.0 * wav_width + 2.0);
            const double n_int = std::exp2(j) * width + 4.0 * (sys.trunc() + n + 2);
            if (std::isinf(prm.p)) {
                sb.push_back(std::max(straddle, interior));
                W.push_back(1.0);
            } else {
                const double lp_p = n_str * std::pow(straddle, prm.p) +
                                    n_int * std::pow(interior, prm.p);
                sb.push_back(std::pow(lp_p, ip));
                W.push_back(1.0);  // folded into sb already
            }
        }
    } else {
        return std::numeric_limits<double>::quiet_NaN();
    }

    // combine across scales
    if (prm.space == Space::SobolevEndpoint) {
        double worst = 0.0;
        for (int t = 0; t < horizon; ++t)
            worst = std::max(worst, std::exp2((J + 1 + t) * (n + 1 - ip)) *
                                        std::pow(W[static_cast<std::size_t>(t)], ip) *
                                        sb[static_cast<std::size_t>(t)]);
        return worst;
    }
    const bool triebel = prm.space == Space::TriebelLizorkin;
    const double u = std::min({std::isinf(prm.p) ? 1.0 : prm.p,
                               std::isinf(prm.q) ? 1.0 : prm.q, 1.0});
    double acc = 0.0, worst = 0.0;
    for (int t = 0; t < horizon; ++t) {
        const int j = J + 1 + t;
        double term;
        if (triebel)
            term = std::exp2(j * prm.s) * sb[static_cast<std::size_t>(t)] *
                   std::pow(W[static_cast<std::size_t>(t)] * std::exp2(-j), ip);
        else
            term = std::exp2(j * (prm.s - ip)) *
                   std::pow(W[static_cast<std::size_t>(t)], ip) *
                   sb[static_cast<std::size_t>(t)];
        if (triebel || !std::isinf(prm.q))
            acc += std::pow(term, triebel ? u : prm.q);
        worst = std::max(worst, term);
    }
    if (triebel) return std::pow(acc, 1.0 / u);
    return std::isinf(prm.q) ? worst : std::pow(acc, 1.0 / prm.q);
}

}  // namespace

FrameNormResult frame_norm(const TestFunction& f, const SplineSystem& sys,
                           const NormParams& prm, int j_max, double tol,
                           const PairOptions& opt) {
    FrameNormResult res;
    res.range = validate_range(prm);
    if (res.range.cls == RangeClass::Outside)
        throw RangeError("norm parameters outside admissible range: " + res.range.detail);
    res.coeffs = frame_coefficients(f, sys, j_max, tol, opt);
    const CoefficientTable table = CoefficientTable::from_frame(res.coeffs);
    res.value = seq_norm(table, prm);
    res.tail_remainder = tail_remainder(f, sys, prm, j_max);
    return res;
}

nlohmann::json FrameNormResult::report(const std::string& fn_desc) const {
    nlohmann::json j;
    j["fn"] = fn_desc;
    j["value"] = value;
    if (std::isnan(tail_remainder))
        j["tail_remainder"] = nullptr;
    else
        j["tail_remainder"] = tail_remainder;
    switch (range.cls) {
        case RangeClass::FrameValid: j["classification"] = "frame_valid"; break;
        case RangeClass::BasisValid: j["classification"] = "basis_valid"; break;
        case RangeClass::Both: j["classification"] = "both"; break;
        case RangeClass::Outside: j["classification"] = "outside"; break;
    }
    if (range.frame_s) j["frame_interval"] = range.frame_s->str();
    if (range.basis_s) j["basis_interval"] = range.basis_s->str();
    j["tail_bound"] = coeffs.tail_bound;
    return j;
}

double lp_norm_deriv(const TestFunction& f, double p, int k) {
    if (k > f.max_weak_order())
        throw std::invalid_argument("lp_norm_deriv: derivative order " + std::to_string(k) +
                                    " unsupported for " + f.describe());
    const double A = f.support_min(), B = f.support_max();
    std::vector<double> edges{A, B};
    for (double b : f.breakpoints())
        if (b > A && b < B) edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    const double fs = std::max(f.feature_scale() / 4.0, (B - A) / 4096.0);
    const auto& rule = quad::gauss_legendre(16);

    if (std::isinf(p)) {
        double best = 0.0, bx = A;
        double hbest = 1.0;
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const int S = std::clamp(static_cast<int>(std::ceil((edges[e + 1] - edges[e]) / fs)),
                                     1, 1 << 16);
            const double len = (edges[e + 1] - edges[e]) / S;
            for (int s = 0; s < S; ++s) {
                const double lo = edges[e] + s * len;
                for (std::size_t i = 0; i <= rule.nodes.size(); ++i) {
                    const double x = i < rule.nodes.size() ? lo + rule.nodes[i] * len : lo;
                    const double v = std::fabs(f.derivative(x, k));
                    if (v > best) {
                        best = v;
                        bx = x;
                        hbest = len / 8;
                    }
                }
            }
        }
        // parabolic refinement around the sampled peak
        for (int it = 0; it < 30; ++it) {
            const double vm = std::fabs(f.derivative(bx - hbest, k));
            const double vp = std::fabs(f.derivative(bx + hbest, k));
            if (vm > best) {
                bx -= hbest;
                best = vm;
                continue;
            }
            if (vp > best) {
                bx += hbest;
                best = vp;
                continue;
            }
            hbest *= 0.5;
            if (hbest < 1e-12) break;
        }
        return best;
    }

    double acc = 0.0;
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const int S =
            std::clamp(static_cast<int>(std::ceil((edges[e + 1] - edges[e]) / fs)), 1, 1 << 16);
        const double len = (edges[e + 1] - edges[e]) / S;
        for (int s = 0; s < S; ++s) {
            const double lo = edges[e] + s * len;
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double v = std::fabs(f.derivative(lo + rule.nodes[i] * len, k));
                if (v > 0) acc += rule.weights[i] * len * std::pow(v, p);
            }
        }
    }
    return std::pow(acc, 1.0 / p);
}

double sobolev_reference_norm(const TestFunction& f, double p, int k) {
    if (k < 1) throw std::invalid_argument("sobolev_reference_norm: k must be >= 1");
    return lp_norm_deriv(f, p, 0) + lp_norm_deriv(f, p, k);
}

CoefficientTable basis_coefficients(const TestFunction& f, const SplineSystem& sys,
                                    int j_max, double tol) {
    CoefficientTable t;
    t.rows.reserve(static_cast<std::size_t>(j_max) + 2);
    {
        ScaleRow raw = oversampled_row(f, sys, -1, tol);
        for (auto& v : raw.values) v /= std::sqrt(2.0);
        t.rows.push_back(std::move(raw));
    }
    for (int j = 0; j <= j_max; ++j) {
        ScaleRow raw = oversampled_row(f, sys, j, tol);
        ScaleRow even;
        even.mu_first = raw.mu_first >= 0 ? (raw.mu_first + 1) / 2 : raw.mu_first / 2;
        const long mu_last = raw.mu_last() >= 0 ? raw.mu_last() / 2 : (raw.mu_last() - 1) / 2;
        if (mu_last >= even.mu_first) {
            even.values.resize(static_cast<std::size_t>(mu_last - even.mu_first + 1));
            for (long mu = even.mu_first; mu <= mu_last; ++mu)
                even.values[static_cast<std::size_t>(mu - even.mu_first)] = raw.at(2 * mu);
        }
        t.rows.push_back(std::move(even));
    }
    return t;
}

}  // namespace blf
