#include "blframe/pairing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "blframe/kernels.hpp"
#include "blframe/parallel.hpp"
#include "blframe/quadrature.hpp"

namespace blf {

namespace {

struct CustomCell {
    std::vector<double> pos;  // node positions within the cell, in [0,1]
    std::vector<double> wts;  // weights, summing to 1
    std::vector<double> fvals;
};

}  // namespace

std::vector<double> pair_row(const TestFunction& f, const PiecewisePoly& U, int j,
                             long nu_first, long count, const PairOptions& opt) {
    std::vector<double> out(static_cast<std::size_t>(std::max(0L, count)), 0.0);
    if (U.empty() || count <= 0) return out;
    if (j < 0) throw std::invalid_argument("pair_row: scale must be >= 0");

    const double hu = U.spacing();
    const double kpos = U.origin() / hu;
    const long ku_first = std::lround(kpos);
    if (std::fabs(kpos - static_cast<double>(ku_first)) > 1e-9)
        throw std::invalid_argument("pair_row: member origin off its knot grid");
    const long npieces = static_cast<long>(U.piece_count());

    const double a = std::ldexp(1.0, j);
    const double w = hu / a;  // cell width

    long c_lo = static_cast<long>(std::floor(f.support_min() / w));
    long c_hi = static_cast<long>(std::ceil(f.support_max() / w));
    c_lo = std::max(c_lo, ku_first + nu_first);
    c_hi = std::min(c_hi, ku_first + nu_first + count - 1 + npieces);
    if (c_lo >= c_hi) return out;
    const long ncells = c_hi - c_lo;

    const int M = opt.nodes > 0 ? opt.nodes : 2 * (U.degree() + 3);
    const auto& rule = quad::gauss_legendre(M);
    int S = 1;
    const double fs = f.feature_scale();
    if (std::isfinite(fs) && fs > 0)
        S = std::clamp(static_cast<int>(std::ceil(2.0 * w / fs)), 1, 1024);
    S *= std::max(1, opt.refine);
    const int T = S * M;

    std::vector<double> pos(static_cast<std::size_t>(T)), lw(static_cast<std::size_t>(T));
    for (int s = 0; s < S; ++s)
        for (int i = 0; i < M; ++i) {
            pos[static_cast<std::size_t>(s * M + i)] =
                (s + rule.nodes[static_cast<std::size_t>(i)]) / S;
            lw[static_cast<std::size_t>(s * M + i)] =
                rule.weights[static_cast<std::size_t>(i)] / S;
        }

    // member piece values at the shared local nodes, weights folded in
    std::vector<double> tloc(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) tloc[static_cast<std::size_t>(t)] = pos[static_cast<std::size_t>(t)] * hu;
    std::vector<std::vector<double>> PW(static_cast<std::size_t>(npieces));
    for (long k = 0; k < npieces; ++k) {
        auto& row = PW[static_cast<std::size_t>(k)];
        row.resize(static_cast<std::size_t>(T));
        kernels::horner_many(U.piece(static_cast<std::size_t>(k)), tloc, row);
        for (int t = 0; t < T; ++t) row[static_cast<std::size_t>(t)] *= lw[static_cast<std::size_t>(t)];
    }

    // cells carrying an interior breakpoint of f get their own panels
    std::map<long, CustomCell> custom;
    for (double b : f.breakpoints()) {
        const double cpos = b / w;
        const long c = static_cast<long>(std::floor(cpos));
        if (c < c_lo || c >= c_hi) continue;
        const double frac = cpos - static_cast<double>(c);
        if (frac < 1e-9 || frac > 1.0 - 1e-9) continue;  // sits on a cell boundary
        custom.emplace(c, CustomCell{});
    }
    for (auto& [c, cell] : custom) {
        std::vector<double> edges{0.0, 1.0};
        for (double b : f.breakpoints()) {
            const double frac = b / w - static_cast<double>(c);
            if (frac > 1e-9 && frac < 1.0 - 1e-9) edges.push_back(frac);
        }
        std::sort(edges.begin(), edges.end());
        for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
            const double len = (edges[e + 1] - edges[e]) / S;
            for (int s = 0; s < S; ++s) {
                const double lo = edges[e] + s * len;
                for (int i = 0; i < M; ++i) {
                    cell.pos.push_back(lo + rule.nodes[static_cast<std::size_t>(i)] * len);
                    cell.wts.push_back(rule.weights[static_cast<std::size_t>(i)] * len);
                }
            }
        }
        cell.fvals.resize(cell.pos.size());
        for (std::size_t t = 0; t < cell.pos.size(); ++t)
            cell.fvals[t] = f((static_cast<double>(c) + cell.pos[t]) * w);
    }

    // f samples on the shared grid
    std::vector<double> F(static_cast<std::size_t>(ncells * T));
    parallel_for(0, ncells, [&](long ci) {
        const long c = c_lo + ci;
        if (custom.count(c)) return;
        double* dst = F.data() + ci * T;
        const double x0 = static_cast<double>(c) * w;
        for (int t = 0; t < T; ++t) dst[t] = f(x0 + pos[static_cast<std::size_t>(t)] * w);
    });

    parallel_for(0, count, [&](long idx) {
        const long nu = nu_first + idx;
        const long cell_min = std::max(c_lo, ku_first + nu);
        const long cell_max = std::min(c_hi, ku_first + nu + npieces);
        double acc = 0.0;
        for (long c = cell_min; c < cell_max; ++c) {
            const auto kappa = static_cast<std::size_t>(c - nu - ku_first);
            const auto it = custom.find(c);
            if (it == custom.end()) {
                acc += kernels::active().dot(F.data() + (c - c_lo) * T,
                                             PW[kappa].data(), static_cast<std::size_t>(T));
            } else {
                const auto& cell = it->second;
                const auto& piece = U.piece(kappa);
                for (std::size_t t = 0; t < cell.pos.size(); ++t) {
                    double v = piece.empty() ? 0.0 : piece.back();
                    for (std::size_t pk = piece.size(); pk-- > 1;)
                        v = v * (cell.pos[t] * hu) + piece[pk - 1];
                    acc += cell.fvals[t] * v * cell.wts[t];
                }
            }
        }
        out[static_cast<std::size_t>(idx)] = acc * w;
    });
    return out;
}

double pair(const TestFunction& f, const SplineSystem& sys, MemberKind kind,
            DyadicIndex idx, const PairOptions& opt) {
    if (const PiecewisePoly* fp = f.piecewise()) {
        if (auto r = try_inner_product(*fp, sys.member_pp(kind, idx))) return *r;
    }
    const PiecewisePoly* U = &sys.scaling_pp();
    int j = 0;
    long nu = 0;
    double scale = 1.0;
    switch (kind) {
        case MemberKind::Scaling:
            break;
        case MemberKind::Wavelet:
            U = &sys.wavelet_pp();
            break;
        case MemberKind::Base:
            nu = idx.mu;
            break;
        case MemberKind::Dyadic:
            if (idx.j < -1) throw std::invalid_argument("pair: j < -1");
            if (idx.j == -1) {
                nu = idx.mu;
                scale = std::sqrt(2.0);
            } else {
                U = &sys.wavelet_pp();
                j = idx.j;
                nu = 2 * idx.mu;
            }
            break;
        case MemberKind::Oversampled:
            if (idx.j < -1) throw std::invalid_argument("pair: j < -1");
            if (idx.j == -1) {
                nu = idx.mu;
            } else {
                U = &sys.wavelet_pp();
                j = idx.j;
                nu = idx.mu;
            }
            break;
    }
    return scale * pair_row(f, *U, j, nu, 1, opt)[0];
}

}  // namespace blf
