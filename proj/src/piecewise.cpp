#include "blframe/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "blframe/kernels.hpp"

namespace blf {

namespace {

// Binomial table large enough for every degree/moment used here.
constexpr int kMaxBinom = 40;

double binom(int n, int k) {
    static const auto table = [] {
        std::array<std::array<double, kMaxBinom + 1>, kMaxBinom + 1> c{};
        for (int i = 0; i <= kMaxBinom; ++i) {
            c[i][0] = 1.0;
            for (int j = 1; j <= i; ++j)
                c[i][j] = c[i - 1][j - 1] + (j <= i - 1 ? c[i - 1][j] : 0.0);
        }
        return c;
    }();
    return table[n][k];
}

double eval_local(const std::vector<double>& c, double t) {
    if (c.empty()) return 0.0;
    double v = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) v = v * t + c[k];
    return v;
}

// Taylor shift: q(t) = p(t + t0)
std::vector<double> shift_poly(const std::vector<double>& p, double t0) {
    std::vector<double> q(p.size(), 0.0);
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t k = 0; k <= j; ++k)
            q[k] += p[j] * binom(static_cast<int>(j), static_cast<int>(k)) *
                    std::pow(t0, static_cast<double>(j - k));
    return q;
}

}  // namespace

PiecewisePoly::PiecewisePoly(double spacing, double origin,
                             std::vector<std::vector<double>> pieces)
    : spacing_(spacing), origin_(origin), pieces_(std::move(pieces)) {
    if (spacing_ <= 0.0) throw std::invalid_argument("PiecewisePoly: spacing must be positive");
}

int PiecewisePoly::degree() const {
    std::size_t len = 1;
    for (const auto& p : pieces_) len = std::max(len, p.size());
    return static_cast<int>(len) - 1;
}

double PiecewisePoly::operator()(double x) const {
    const double u = (x - origin_) / spacing_;
    if (u < 0.0 || u >= static_cast<double>(pieces_.size())) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    if (i >= pieces_.size()) return 0.0;
    return eval_local(pieces_[i], x - knot(i));
}

void PiecewisePoly::eval_many(std::span<const double> xs, std::span<double> out) const {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
}

double PiecewisePoly::derivative_at(double x, int k) const {
    const double u = (x - origin_) / spacing_;
    if (u < 0.0 || u >= static_cast<double>(pieces_.size())) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    const auto& c = pieces_[i];
    const double t = x - knot(i);
    double v = 0.0;
    for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
        double fac = 1.0;
        for (int m = 0; m < k; ++m) fac *= static_cast<double>(j - m);
        v = v * t + fac * c[j];
    }
    return v;
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<std::vector<double>> out(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& c = pieces_[i];
        std::vector<double> d(c.size() > 1 ? c.size() - 1 : 1, 0.0);
        for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = static_cast<double>(j) * c[j];
        out[i] = std::move(d);
    }
    return {spacing_, origin_, std::move(out)};
}

PiecewisePoly PiecewisePoly::antiderivative() const {
    std::vector<std::vector<double>> out(pieces_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& c = pieces_[i];
        std::vector<double> a(c.size() + 1, 0.0);
        a[0] = acc;
        for (std::size_t j = 0; j < c.size(); ++j) a[j + 1] = c[j] / static_cast<double>(j + 1);
        acc = eval_local(a, spacing_);
        out[i] = std::move(a);
    }
    return {spacing_, origin_, std::move(out)};
}

double PiecewisePoly::integral() const {
    double s = 0.0;
    for (const auto& c : pieces_)
        for (std::size_t j = 0; j < c.size(); ++j)
            s += c[j] * std::pow(spacing_, static_cast<double>(j + 1)) / static_cast<double>(j + 1);
    return s;
}

double PiecewisePoly::moment(int kappa) const {
    // int (L+t)^kappa p(t) dt expanded binomially per piece
    double s = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& c = pieces_[i];
        const double L = knot(i);
        for (int m = 0; m <= kappa; ++m) {
            const double w = binom(kappa, m) * std::pow(L, static_cast<double>(kappa - m));
            for (std::size_t j = 0; j < c.size(); ++j)
                s += w * c[j] * std::pow(spacing_, static_cast<double>(m + j + 1)) /
                     static_cast<double>(m + j + 1);
        }
    }
    return s;
}

double PiecewisePoly::l2_norm() const {
    return std::sqrt(std::max(0.0, inner_product(*this, *this)));
}

double PiecewisePoly::sup_bound() const {
    double b = 0.0;
    for (const auto& c : pieces_) {
        double s = 0.0, hp = 1.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            s += std::fabs(c[j]) * hp;
            hp *= spacing_;
        }
        b = std::max(b, s);
    }
    return b;
}

std::vector<double> PiecewisePoly::taylor_at(std::size_t piece_index, double c) const {
    return shift_poly(pieces_[piece_index], c - knot(piece_index));
}

double PiecewisePoly::one_sided(std::size_t knot_index, int k, bool from_left) const {
    if (from_left) {
        if (knot_index == 0 || knot_index > pieces_.size()) return 0.0;
        const auto& c = pieces_[knot_index - 1];
        double v = 0.0;
        const double t = spacing_;
        for (std::size_t j = c.size(); j-- > static_cast<std::size_t>(k);) {
            double fac = 1.0;
            for (int m = 0; m < k; ++m) fac *= static_cast<double>(j - m);
            v = v * t + fac * c[j];
        }
        return v;
    }
    if (knot_index >= pieces_.size()) return 0.0;
    const auto& c = pieces_[knot_index];
    if (static_cast<std::size_t>(k) >= c.size()) return 0.0;
    double fac = 1.0;
    for (int m = 0; m < k; ++m) fac *= static_cast<double>(k - m);
    return fac * c[k];
}

PiecewisePoly PiecewisePoly::refined(int factor) const {
    if (factor <= 1) return *this;
    const double h = spacing_ / factor;
    std::vector<std::vector<double>> out;
    out.reserve(pieces_.size() * factor);
    for (const auto& c : pieces_)
        for (int s = 0; s < factor; ++s) out.push_back(shift_poly(c, s * h));
    return {h, origin_, std::move(out)};
}

PiecewisePoly PiecewisePoly::precompose_affine(double a, double b) const {
    if (a <= 0.0) throw std::invalid_argument("precompose_affine: a must be positive");
    std::vector<std::vector<double>> out(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& c = pieces_[i];
        std::vector<double> d(c.size());
        double ap = 1.0;
        for (std::size_t j = 0; j < c.size(); ++j) {
            d[j] = c[j] * ap;
            ap *= a;
        }
        out[i] = std::move(d);
    }
    return {spacing_ / a, (origin_ + b) / a, std::move(out)};
}

PiecewisePoly PiecewisePoly::scaled(double c) const {
    std::vector<std::vector<double>> out = pieces_;
    for (auto& p : out)
        for (auto& v : p) v *= c;
    return {spacing_, origin_, std::move(out)};
}

PiecewisePoly PiecewisePoly::trimmed(double eps) const {
    auto piece_bound = [&](const std::vector<double>& c) {
        double s = 0.0, hp = 1.0;
        for (double v : c) {
            s += std::fabs(v) * hp;
            hp *= spacing_;
        }
        return s;
    };
    std::size_t lo = 0, hi = pieces_.size();
    while (lo < hi && piece_bound(pieces_[lo]) < eps) ++lo;
    while (hi > lo && piece_bound(pieces_[hi - 1]) < eps) --hi;
    std::vector<std::vector<double>> out(pieces_.begin() + static_cast<long>(lo),
                                         pieces_.begin() + static_cast<long>(hi));
    return {spacing_, knot(lo), std::move(out)};
}

PiecewisePoly PiecewisePoly::shift_combination(const PiecewisePoly& u,
                                               std::span<const double> coeffs,
                                               long k_first, double stride) {
    if (u.empty() || coeffs.empty()) return {};
    const double ratio = stride / u.spacing();
    const long step = std::lround(ratio);
    if (step <= 0 || std::fabs(ratio - static_cast<double>(step)) > 1e-9)
        throw std::invalid_argument("shift_combination: stride must be a multiple of spacing");
    const long nterms = static_cast<long>(coeffs.size());
    const long np = static_cast<long>(u.piece_count());
    // term j occupies piece slots [j*step, j*step + np) relative to term 0
    const long total = (nterms - 1) * step + np;
    std::vector<std::vector<double>> out(static_cast<std::size_t>(total));
    const auto deg = static_cast<std::size_t>(u.degree());
    for (auto& p : out) p.assign(deg + 1, 0.0);
    for (long j = 0; j < nterms; ++j) {
        const double w = coeffs[static_cast<std::size_t>(j)];
        if (w == 0.0) continue;
        for (long i = 0; i < np; ++i) {
            auto& dst = out[static_cast<std::size_t>(j * step + i)];
            const auto& src = u.piece(static_cast<std::size_t>(i));
            for (std::size_t k = 0; k < src.size(); ++k) dst[k] += w * src[k];
        }
    }
    const double origin = u.origin() + static_cast<double>(k_first) * stride;
    return {u.spacing(), origin, std::move(out)};
}

namespace {

// Smallest (np, nq) with p.spacing/np == q.spacing/nq, if any.
std::optional<std::pair<int, int>> refine_factors(double hp, double hq) {
    for (int np = 1; np <= 64; ++np)
        for (int nq = 1; nq <= 64; ++nq)
            if (std::fabs(hp / np - hq / nq) <= 1e-12 * std::max(hp, hq)) return {{np, nq}};
    return std::nullopt;
}

}  // namespace

std::optional<double> try_inner_product(const PiecewisePoly& p0, const PiecewisePoly& q0) {
    if (p0.empty() || q0.empty()) return 0.0;
    const auto fac = refine_factors(p0.spacing(), q0.spacing());
    if (!fac) return std::nullopt;
    const PiecewisePoly p = p0.refined(fac->first);
    const PiecewisePoly q = q0.refined(fac->second);
    const double h = p.spacing();
    const double off = (q.origin() - p.origin()) / h;
    const long offset = std::lround(off);
    if (std::fabs(off - static_cast<double>(offset)) > 1e-9) return std::nullopt;

    // overlap in p's piece indices
    const long lo = std::max(0L, offset);
    const long hi = std::min(static_cast<long>(p.piece_count()),
                             offset + static_cast<long>(q.piece_count()));
    double s = 0.0;
    for (long i = lo; i < hi; ++i) {
        const auto& a = p.piece(static_cast<std::size_t>(i));
        const auto& b = q.piece(static_cast<std::size_t>(i - offset));
        for (std::size_t ja = 0; ja < a.size(); ++ja) {
            if (a[ja] == 0.0) continue;
            for (std::size_t jb = 0; jb < b.size(); ++jb)
                s += a[ja] * b[jb] * std::pow(h, static_cast<double>(ja + jb + 1)) /
                     static_cast<double>(ja + jb + 1);
        }
    }
    return s;
}

double inner_product(const PiecewisePoly& p, const PiecewisePoly& q) {
    const auto r = try_inner_product(p, q);
    if (!r) throw std::invalid_argument("inner_product: incommensurate knot grids");
    return *r;
}

PiecewisePoly linear_combine(double a, const PiecewisePoly& p0, double b,
                             const PiecewisePoly& q0) {
    if (p0.empty()) return q0.scaled(b);
    if (q0.empty()) return p0.scaled(a);
    const auto fac = refine_factors(p0.spacing(), q0.spacing());
    if (!fac) throw std::invalid_argument("linear_combine: incommensurate knot grids");
    const PiecewisePoly p = p0.refined(fac->first);
    const PiecewisePoly q = q0.refined(fac->second);
    const double h = p.spacing();
    const double off = (q.origin() - p.origin()) / h;
    const long offset = std::lround(off);
    if (std::fabs(off - static_cast<double>(offset)) > 1e-9)
        throw std::invalid_argument("linear_combine: misaligned knot grids");

    const long lo = std::min(0L, offset);
    const long hi = std::max(static_cast<long>(p.piece_count()),
                             offset + static_cast<long>(q.piece_count()));
    const auto deg = static_cast<std::size_t>(std::max(p.degree(), q.degree()));
    std::vector<std::vector<double>> pieces(static_cast<std::size_t>(hi - lo));
    for (auto& c : pieces) c.assign(deg + 1, 0.0);
    for (long i = 0; i < static_cast<long>(p.piece_count()); ++i) {
        const auto& src = p.piece(static_cast<std::size_t>(i));
        auto& dst = pieces[static_cast<std::size_t>(i - lo)];
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] += a * src[k];
    }
    for (long i = 0; i < static_cast<long>(q.piece_count()); ++i) {
        const auto& src = q.piece(static_cast<std::size_t>(i));
        auto& dst = pieces[static_cast<std::size_t>(i + offset - lo)];
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] += b * src[k];
    }
    return {h, p.origin() + static_cast<double>(lo) * h, std::move(pieces)};
}

}  // namespace blf
