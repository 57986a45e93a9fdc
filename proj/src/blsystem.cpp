#include "blframe/blsystem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "blframe/bspline.hpp"
#include "blframe/errors.hpp"

namespace blf {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

using cld = std::complex<long double>;

// Periodic symbol machinery on the grid xi_t = 2 pi t / N. All phases are
// table lookups at exact integer indices, so no rotation drift enters the
// coefficient sums; accumulation is in long double because the vanishing-
// moment residuals of the truncated sequences amplify coefficient noise by
// powers of the shift index.
class SymbolEngine {
public:
    SymbolEngine(int n, int N) : n_(n), N_(N), cos_(N), sin_(N), E_(N) {
        const long double two_pi = 2.0L * 3.14159265358979323846264338327950288L;
        for (int u = 0; u < N; ++u) {
            cos_[u] = std::cos(two_pi * u / N);
            sin_[u] = std::sin(two_pi * u / N);
        }
        std::vector<long double> a(static_cast<std::size_t>(n) + 1);
        for (int j = 0; j <= n; ++j)
            a[static_cast<std::size_t>(j)] = bspline::eval_ld(2 * n + 1, n + 1 + j);
        for (int t = 0; t < N; ++t) {
            long double s = a[0];
            for (int j = 1; j <= n; ++j)
                s += 2.0L * a[static_cast<std::size_t>(j)] * cos_[static_cast<std::size_t>((static_cast<long>(j) * t) % N)];
            E_[static_cast<std::size_t>(t)] = s;
        }
    }

    long double E(int t) const { return E_[static_cast<std::size_t>(((t % N_) + N_) % N_)]; }

    long double E_min() const {
        long double m = E_[0];
        for (long double v : E_) m = std::min(m, v);
        return m;
    }

    cld unit(long u) const {  // e^{+i xi_u}
        const auto v = static_cast<std::size_t>(((u % N_) + N_) % N_);
        return {cos_[v], sin_[v]};
    }

    // low-pass symbol m0(xi_t)
    cld m0(int t) const {
        cld base = (1.0L + std::conj(unit(t))) * 0.5L;
        cld p{1.0L, 0.0L};
        for (int i = 0; i <= n_; ++i) p *= base;
        return p * std::sqrt(E(t) / E(2 * t));
    }

    // m1(xi_t) = e^{-i xi_t} conj(m0(xi_t + pi))
    cld m1(int t) const { return std::conj(unit(t)) * std::conj(m0(t + N_ / 2)); }

    // (1/N) sum_t g_t e^{+i k xi_t} for k = -kmax..kmax
    std::vector<double> coefficients(const std::vector<cld>& g, int kmax,
                                     double* max_imag = nullptr) const {
        std::vector<double> out(static_cast<std::size_t>(2 * kmax + 1));
        long double worst = 0.0L;
        for (int k = -kmax; k <= kmax; ++k) {
            cld acc{0.0L, 0.0L};
            for (int t = 0; t < N_; ++t)
                acc += g[static_cast<std::size_t>(t)] * unit(static_cast<long>(k) * t);
            acc /= static_cast<long double>(N_);
            worst = std::max(worst, std::fabs(acc.imag()));
            out[static_cast<std::size_t>(k + kmax)] = static_cast<double>(acc.real());
        }
        if (max_imag) *max_imag = static_cast<double>(worst);
        return out;
    }

    int samples() const { return N_; }

private:
    int n_, N_;
    std::vector<long double> cos_, sin_, E_;
};

// Smallest K with sum of |coefficients| outside [-K, K] below tol.
int tail_cutoff(std::span<const double> c, int kmax, double tol, double* tail_at_cut) {
    int K = kmax;
    double tail = 0.0;
    while (K > 8) {
        const double add = std::fabs(c[static_cast<std::size_t>(kmax - K)]) +
                           std::fabs(c[static_cast<std::size_t>(kmax + K)]);
        if (tail + add > tol) break;
        tail += add;
        --K;
    }
    if (tail_at_cut) *tail_at_cut = tail;
    return K;
}

double tail_mass(std::span<const double> c, int kmax, int K) {
    double t = 0.0;
    for (int k = K + 1; k <= kmax; ++k)
        t += std::fabs(c[static_cast<std::size_t>(kmax - k)]) +
             std::fabs(c[static_cast<std::size_t>(kmax + k)]);
    return t;
}

// Least-norm correction restoring the n+1 vanishing moments on the truncated
// wavelet sequence. Symmetric truncation leaves moment residuals of the order
// of the discarded tail times K^n, which at K = 80 and n = 4 would dominate
// the moment tolerance; the repair moves each coefficient by far less than
// the truncation already did.
void repair_moments(std::vector<double>& e, long e_first, int n) {
    const PiecewisePoly& b = bspline::piecewise(n);
    std::vector<double> base(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) base[static_cast<std::size_t>(i)] = b.moment(i);

    const auto dim = static_cast<long>(e.size());
    Eigen::MatrixXd A(n + 1, dim);
    for (long c = 0; c < dim; ++c) {
        const double k = static_cast<double>(e_first + c);
        for (int kap = 0; kap <= n; ++kap) {
            // int x^kap B_n(2x - k) dx = 2^{-kap-1} sum_i C(kap,i) k^{kap-i} m_i
            double s = 0.0, comb = 1.0;
            for (int i = 0; i <= kap; ++i) {
                s += comb * std::pow(k, static_cast<double>(kap - i)) *
                     base[static_cast<std::size_t>(i)];
                comb = comb * static_cast<double>(kap - i) / static_cast<double>(i + 1);
            }
            A(kap, c) = std::ldexp(s, -(kap + 1));
        }
    }
    Eigen::VectorXd r = A * Eigen::Map<const Eigen::VectorXd>(e.data(), dim);
    // row scaling keeps the small normal system well conditioned
    Eigen::VectorXd scale(n + 1);
    for (int kap = 0; kap <= n; ++kap) scale(kap) = std::max(A.row(kap).norm(), 1e-300);
    const Eigen::MatrixXd As = scale.cwiseInverse().asDiagonal() * A;
    const Eigen::VectorXd rs = scale.cwiseInverse().asDiagonal() * r;
    const Eigen::VectorXd delta = -As.transpose() * (As * As.transpose()).ldlt().solve(rs);
    for (long c = 0; c < dim; ++c) e[static_cast<std::size_t>(c)] += delta(c);
}

}  // namespace

std::optional<DecayFit> decay_fit(std::span<const double> abscissae,
                                  std::span<const double> values, double k0) {
    if (abscissae.size() != values.size() || values.empty())
        throw std::invalid_argument("decay_fit: bad sample arrays");

    // compact support: the farthest sample(s) vanish exactly
    double far = 0.0;
    double far_val = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::fabs(abscissae[i]) > far) {
            far = std::fabs(abscissae[i]);
            far_val = values[i];
        }
    }
    const bool compact = far_val == 0.0;

    std::vector<double> xs, ys;
    double vmax = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        vmax = std::max(vmax, std::fabs(values[i]));
        if (std::fabs(abscissae[i]) < k0 || values[i] == 0.0) continue;
        xs.push_back(std::fabs(abscissae[i]));
        ys.push_back(std::log(std::fabs(values[i])));
    }
    if (xs.size() < 8) {
        if (compact) return DecayFit{vmax, 0.0, true};
        return std::nullopt;
    }
    const auto n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::nullopt;
    const double slope = (n * sxy - sx * sy) / denom;
    const double inter = (sy - slope * sx) / n;
    return DecayFit{std::exp(inter), -slope, compact};
}

SplineSystem SplineSystem::build(const BuildParams& p) {
    if (p.order < 0) throw std::invalid_argument("build: order must be >= 0");
    if (!is_pow2(p.symbol_samples) || p.symbol_samples < 1024)
        throw std::invalid_argument("build: symbol_samples must be a power of two >= 1024");
    if (p.trunc != -1 && p.trunc < 8)
        throw std::invalid_argument("build: truncation must be >= 8 (or -1 for automatic)");

    SplineSystem sys;
    sys.order_ = p.order;
    sys.symbol_samples_ = p.symbol_samples;

    if (p.order == 0) {
        // the Haar pair, exactly
        sys.trunc_ = p.trunc == -1 ? 8 : p.trunc;
        sys.d_ = {1.0};
        sys.d_first_ = 0;
        sys.e_ = {1.0, -1.0};
        sys.e_first_ = 0;
        sys.scaling_pp_ = bspline::piecewise(0);
        sys.wavelet_pp_ = PiecewisePoly{0.5, 0.0, {{1.0}, {-1.0}}};
        sys.decay_ = DecayFit{std::exp(1.0), 1.0, true};
        sys.truncation_tail_ = 0.0;
        return sys;
    }

    const int n = p.order;
    const int N = p.symbol_samples;
    SymbolEngine eng(n, N);
    if (eng.E_min() < 1e-10)
        throw NumericalError("build: autocorrelation symbol nearly singular (min < 1e-10)");

    const int kmax = std::min(256, N / 2 - 1);
    std::vector<cld> g_d(static_cast<std::size_t>(N)), g_e(static_cast<std::size_t>(N));
    for (int t = 0; t < N; ++t) {
        const long double inv_sqrt = 1.0L / std::sqrt(eng.E(t));
        g_d[static_cast<std::size_t>(t)] = cld{inv_sqrt, 0.0L};
        g_e[static_cast<std::size_t>(t)] = 2.0L * eng.m1(t) * inv_sqrt;
    }
    double imag_d = 0.0, imag_e = 0.0;
    std::vector<double> d_full = eng.coefficients(g_d, kmax, &imag_d);
    std::vector<double> e_full = eng.coefficients(g_e, kmax, &imag_e);
    if (std::max(imag_d, imag_e) > 1e-12)
        throw NumericalError("build: symbol coefficients have non-negligible imaginary part");

    int K = p.trunc;
    if (K == -1) {
        double td = 0.0, te = 0.0;
        const int Kd = tail_cutoff(d_full, kmax, 5e-11, &td);
        const int Ke = tail_cutoff(e_full, kmax, 5e-11, &te);
        K = std::max({Kd, Ke, 8});
    }
    K = std::min(K, kmax);
    sys.trunc_ = K;
    sys.truncation_tail_ = tail_mass(d_full, kmax, K) + tail_mass(e_full, kmax, K);

    sys.d_.assign(d_full.begin() + (kmax - K), d_full.begin() + (kmax + K + 1));
    sys.d_first_ = -K;
    sys.e_.assign(e_full.begin() + (kmax - K), e_full.begin() + (kmax + K + 1));
    sys.e_first_ = -K;
    repair_moments(sys.e_, sys.e_first_, n);
    sys.finalize();
    return sys;
}

void SplineSystem::finalize() {
    const int n = order_;
    const PiecewisePoly& b = bspline::piecewise(n);
    scaling_pp_ = PiecewisePoly::shift_combination(b, d_, d_first_, 1.0);
    const PiecewisePoly b2 = b.precompose_affine(2.0, 0.0);
    wavelet_pp_ = PiecewisePoly::shift_combination(b2, e_, e_first_, 0.5);

    // property (III) envelope: fit gamma on the signal region of the knot
    // samples, then take C0 as the sampled sup of (|Psi^(k)| + |psi^(k)|) e^{gamma|x|}
    auto knot_samples = [](const PiecewisePoly& f) {
        std::vector<double> ks, vs;
        for (std::size_t i = 0; i < f.piece_count(); ++i) {
            ks.push_back(f.knot(i));
            vs.push_back(f(f.knot(i) + 0.25 * f.spacing()));
        }
        return std::pair{ks, vs};
    };
    auto fit_one = [&](const PiecewisePoly& f) -> std::optional<DecayFit> {
        auto [ks, vs] = knot_samples(f);
        double vmax = 0.0;
        for (double v : vs) vmax = std::max(vmax, std::fabs(v));
        std::vector<double> ks2, vs2;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (std::fabs(vs[i]) >= 1e-14 * vmax) {
                ks2.push_back(ks[i]);
                vs2.push_back(vs[i]);
            }
        }
        return decay_fit(ks2, vs2);
    };
    const auto fw = fit_one(wavelet_pp_);
    const auto fs = fit_one(scaling_pp_);
    double gamma = 0.5;
    if (fw && fs && fw->gamma > 0 && fs->gamma > 0)
        gamma = std::min(fw->gamma, fs->gamma);
    else if (fw && fw->gamma > 0)
        gamma = fw->gamma;

    double c0 = 0.0;
    auto scan = [&](const PiecewisePoly& f, int k) {
        PiecewisePoly g = f;
        for (int i = 0; i < k; ++i) g = g.derivative();
        double vmax = 0.0;
        for (std::size_t i = 0; i < g.piece_count(); ++i)
            for (int s = 0; s < 4; ++s)
                vmax = std::max(vmax, std::fabs(g(g.knot(i) + (s + 0.125) * 0.25 * g.spacing())));
        for (std::size_t i = 0; i < g.piece_count(); ++i) {
            for (int s = 0; s < 4; ++s) {
                const double x = g.knot(i) + (s + 0.125) * 0.25 * g.spacing();
                const double v = std::fabs(g(x));
                if (v < 1e-14 * vmax) continue;  // below coefficient noise
                c0 = std::max(c0, v * std::exp(gamma * std::fabs(x)));
            }
        }
    };
    for (int k = 0; k <= std::max(0, n - 1); ++k) {
        scan(scaling_pp_, k);
        scan(wavelet_pp_, k);
    }
    decay_ = DecayFit{1.05 * c0, gamma, false};
}

double SplineSystem::eval_member(MemberKind kind, DyadicIndex idx, double x) const {
    switch (kind) {
        case MemberKind::Scaling:
            return scaling_pp_(x);
        case MemberKind::Wavelet:
            return wavelet_pp_(x);
        case MemberKind::Base:
            return scaling_pp_(x - static_cast<double>(idx.mu));
        case MemberKind::Dyadic:
            if (idx.j < -1) throw std::invalid_argument("eval_member: j < -1");
            if (idx.j == -1)
                return std::sqrt(2.0) * scaling_pp_(x - static_cast<double>(idx.mu));
            return wavelet_pp_(std::ldexp(x, idx.j) - static_cast<double>(idx.mu));
        case MemberKind::Oversampled:
            if (idx.j < -1) throw std::invalid_argument("eval_member: j < -1");
            if (idx.j == -1) return scaling_pp_(x - static_cast<double>(idx.mu));
            return wavelet_pp_(std::ldexp(x, idx.j) - 0.5 * static_cast<double>(idx.mu));
    }
    return 0.0;
}

PiecewisePoly SplineSystem::member_pp(MemberKind kind, DyadicIndex idx) const {
    switch (kind) {
        case MemberKind::Scaling:
            return scaling_pp_;
        case MemberKind::Wavelet:
            return wavelet_pp_;
        case MemberKind::Base:
            return scaling_pp_.shifted(static_cast<double>(idx.mu));
        case MemberKind::Dyadic:
            if (idx.j < -1) throw std::invalid_argument("member_pp: j < -1");
            if (idx.j == -1)
                return scaling_pp_.shifted(static_cast<double>(idx.mu)).scaled(std::sqrt(2.0));
            return wavelet_pp_.precompose_affine(std::ldexp(1.0, idx.j),
                                                 static_cast<double>(idx.mu));
        case MemberKind::Oversampled:
            if (idx.j < -1) throw std::invalid_argument("member_pp: j < -1");
            if (idx.j == -1) return scaling_pp_.shifted(static_cast<double>(idx.mu));
            return wavelet_pp_.precompose_affine(std::ldexp(1.0, idx.j),
                                                 0.5 * static_cast<double>(idx.mu));
    }
    return {};
}

std::vector<double> SplineSystem::piecewise_coefficients(bool wavelet, long mu) const {
    const PiecewisePoly& f = wavelet ? wavelet_pp_ : scaling_pp_;
    const PiecewisePoly half = f.spacing() == 0.5 ? f : f.refined(2);
    std::vector<double> out(static_cast<std::size_t>(order_) + 1, 0.0);
    const double left = 0.5 * static_cast<double>(mu - 1);
    const double pos = (left - half.origin()) / half.spacing();
    const long i = std::lround(pos);
    if (std::fabs(pos - static_cast<double>(i)) > 1e-9 || i < 0 ||
        i >= static_cast<long>(half.piece_count()))
        return out;  // outside the window
    const auto t = half.taylor_at(static_cast<std::size_t>(i), 0.5 * static_cast<double>(mu));
    for (std::size_t k = 0; k < t.size() && k < out.size(); ++k) out[k] = t[k];
    return out;
}

std::vector<double> SplineSystem::moments(bool wavelet, int kappa_max) const {
    if (kappa_max < 0 || kappa_max > 2 * order_ + 4)
        throw std::invalid_argument("moments: kappa_max must be in [0, 2n+4]");
    const PiecewisePoly& f = wavelet ? wavelet_pp_ : scaling_pp_;
    std::vector<double> out(static_cast<std::size_t>(kappa_max) + 1);
    for (int k = 0; k <= kappa_max; ++k) out[static_cast<std::size_t>(k)] = f.moment(k);
    return out;
}

PiecewisePoly SplineSystem::antiderivative_rho() const {
    const int n = order_;
    if (n == 0) return bspline::piecewise(1);  // rho' (2x) = h(x) exactly

    SymbolEngine eng(n, symbol_samples_);
    const int N = eng.samples();
    const int kmax = std::min(256, N / 2 - 1);
    // R(zeta) = 2^{-n} (-1)^{n+1} e^{i zeta n} sqrt(E(zeta+pi) / (E(2 zeta) E(zeta)))
    const long double scale =
        std::ldexp(1.0L, -n) * ((n + 1) % 2 == 0 ? 1.0L : -1.0L);
    std::vector<cld> g(static_cast<std::size_t>(N));
    for (int t = 0; t < N; ++t) {
        const long double mag =
            std::sqrt(eng.E(t + N / 2) / (eng.E(2 * t) * eng.E(t)));
        g[static_cast<std::size_t>(t)] =
            scale * mag * eng.unit(static_cast<long>(n) * t);
    }
    double imag = 0.0;
    const std::vector<double> r_full = eng.coefficients(g, kmax, &imag);
    if (imag > 1e-12)
        throw NumericalError("antiderivative_rho: coefficients have imaginary part");
    double tail = 0.0;
    const int Kr = tail_cutoff(r_full, kmax, 1e-10, &tail);
    std::vector<double> r(r_full.begin() + (kmax - Kr), r_full.begin() + (kmax + Kr + 1));
    const PiecewisePoly rho =
        PiecewisePoly::shift_combination(bspline::piecewise(2 * n + 1), r, -Kr, 1.0);
    return rho.trimmed(1e-14);
}

nlohmann::json SplineSystem::to_json() const {
    nlohmann::json j;
    j["format"] = "blframe-system-v1";
    j["order"] = order_;
    j["trunc"] = trunc_;
    j["symbol_samples"] = symbol_samples_;
    j["scaling_first"] = d_first_;
    j["scaling_coeffs"] = d_;
    j["wavelet_first"] = e_first_;
    j["wavelet_coeffs"] = e_;
    j["decay"] = {{"C0", decay_.C}, {"gamma", decay_.gamma}, {"compact", decay_.compact}};
    j["truncation_tail"] = truncation_tail_;
    return j;
}

SplineSystem SplineSystem::from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "blframe-system-v1")
        throw std::invalid_argument("from_json: not a blframe system document");
    SplineSystem sys;
    sys.order_ = j.at("order").get<int>();
    sys.trunc_ = j.at("trunc").get<int>();
    sys.symbol_samples_ = j.at("symbol_samples").get<int>();
    sys.d_ = j.at("scaling_coeffs").get<std::vector<double>>();
    sys.d_first_ = j.at("scaling_first").get<long>();
    sys.e_ = j.at("wavelet_coeffs").get<std::vector<double>>();
    sys.e_first_ = j.at("wavelet_first").get<long>();
    sys.truncation_tail_ = j.at("truncation_tail").get<double>();
    if (sys.order_ == 0) {
        sys.scaling_pp_ = bspline::piecewise(0);
        sys.wavelet_pp_ = PiecewisePoly{0.5, 0.0, {{1.0}, {-1.0}}};
        sys.decay_ = DecayFit{std::exp(1.0), 1.0, true};
    } else {
        sys.finalize();
    }
    // stored decay constants win over the refit (bit-identical reload)
    const auto& d = j.at("decay");
    sys.decay_ = DecayFit{d.at("C0").get<double>(), d.at("gamma").get<double>(),
                          d.at("compact").get<bool>()};
    return sys;
}

}  // namespace blf
