#include "blframe/lp_ref.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>

#include "blframe/errors.hpp"

namespace blf::lp {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

struct FftBuffers {
    std::size_t n = 0;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd{}, bwd{};

    explicit FftBuffers(std::size_t size) : n(size) {
        std::lock_guard lock(fftw_mutex());
        in = fftw_alloc_complex(n);
        out = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~FftBuffers() {
        std::lock_guard lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(in);
        fftw_free(out);
    }
    FftBuffers(const FftBuffers&) = delete;
    FftBuffers& operator=(const FftBuffers&) = delete;
};

// frequency of bin i on a grid with spacing dx
double bin_freq(std::size_t i, std::size_t n, double dx) {
    const auto half = static_cast<long>(n / 2);
    auto k = static_cast<long>(i);
    if (k >= half) k -= static_cast<long>(n);
    return 2.0 * kPi * static_cast<double>(k) / (static_cast<double>(n) * dx);
}

}  // namespace

double GridSpec::nyquist() const { return kPi / dx(); }

double Partition::eta(double xi) {
    const double a = std::fabs(xi);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    const double t = 2.0 * (1.0 - a);  // 1 at |xi| = 1/2, 0 at |xi| = 1
    const double u = std::exp(-1.0 / t);
    const double v = std::exp(-1.0 / (1.0 - t));
    return u / (u + v);
}

double Partition::phi0(double xi) { return std::sqrt(eta(xi)); }

double Partition::phi_unit(double xi) {
    const double d = eta(xi) - eta(2.0 * xi);
    return d > 0.0 ? std::sqrt(d) : 0.0;
}

double Partition::phi_k(int k, double xi) const {
    return k == 0 ? phi0(xi) : phi_unit(std::ldexp(xi, -k));
}

double Partition::lambda_k(int k, double xi) const {
    // quotient form with the reconstruction cutoff eta_R = eta^2
    if (k == 0) {
        const double denom = phi0(xi);
        if (denom < 1e-150) return 0.0;
        const double e = eta(xi);
        return e * e / denom;
    }
    const double z = std::ldexp(xi, -k);
    const double denom = phi_unit(z);
    if (denom < 1e-150) return 0.0;
    const double e1 = eta(z), e2 = eta(2.0 * z);
    return (e1 * e1 - e2 * e2) / denom;
}

double Partition::square_defect(double xi) const {
    double s = 0.0;
    for (int k = 0; k <= levels; ++k) {
        const double v = phi_k(k, xi);
        s += v * v;
    }
    return 1.0 - s;
}

GridSpec default_grid(const TestFunction& f, int levels) {
    GridSpec g;
    g.x_min = f.support_min() - 20.0;
    g.x_max = f.support_max() + 20.0;
    std::size_t m = 1 << 16;
    while (kPi * static_cast<double>(m) / (g.x_max - g.x_min) <
               1.05 * std::ldexp(1.0, levels) &&
           m < (1u << 22))
        m <<= 1;
    g.samples = m;
    return g;
}

namespace {

Pieces make_pieces(const TestFunction& f, int levels, const GridSpec& grid, bool use_lambda) {
    if (levels < 0) throw std::invalid_argument("lp_pieces: levels must be >= 0");
    if ((grid.samples & (grid.samples - 1)) != 0)
        throw std::invalid_argument("lp_pieces: grid samples must be a power of two");
    const double band = std::ldexp(1.0, levels);
    if (grid.nyquist() < band) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "grid resolution insufficient for level %d: spacing %.6g required, got %.6g",
                      levels, kPi / band, grid.dx());
        throw NumericalError(msg);
    }

    Pieces out;
    out.grid = grid;
    out.partition.levels = levels;
    const std::size_t n = grid.samples;
    const double dx = grid.dx();

    out.f_samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.f_samples[i] = f(grid.x_min + static_cast<double>(i) * dx);

    FftBuffers fft(n);
    for (std::size_t i = 0; i < n; ++i) {
        fft.in[i][0] = out.f_samples[i];
        fft.in[i][1] = 0.0;
    }
    fftw_execute(fft.fwd);
    std::vector<std::complex<double>> fhat(n);
    for (std::size_t i = 0; i < n; ++i) fhat[i] = {fft.out[i][0], fft.out[i][1]};

    out.L.resize(static_cast<std::size_t>(levels) + 1);
    for (int k = 0; k <= levels; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = bin_freq(i, n, dx);
            const double m = use_lambda ? out.partition.lambda_k(k, xi)
                                        : out.partition.phi_k(k, xi);
            const std::complex<double> v = fhat[i] * m / static_cast<double>(n);
            fft.in[i][0] = v.real();
            fft.in[i][1] = v.imag();
        }
        fftw_execute(fft.bwd);
        auto& piece = out.L[static_cast<std::size_t>(k)];
        piece.resize(n);
        for (std::size_t i = 0; i < n; ++i) piece[i] = fft.out[i][0];
    }
    return out;
}

double grid_lp(const std::vector<double>& v, double p, double dx) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    double s = 0.0;
    for (double x : v)
        if (x != 0.0) s += std::pow(std::fabs(x), p);
    return std::pow(s * dx, 1.0 / p);
}

}  // namespace

double Pieces::grid_l2(int k) const {
    return grid_lp(L[static_cast<std::size_t>(k)], 2.0, grid.dx());
}

Pieces lp_pieces(const TestFunction& f, int levels, const GridSpec& grid) {
    return make_pieces(f, levels, grid, false);
}

Pieces lambda_pieces(const TestFunction& f, int levels, const GridSpec& grid) {
    return make_pieces(f, levels, grid, true);
}

double reference_norm_from_pieces(const Pieces& pieces, const NormParams& prm) {
    const int K = pieces.partition.levels;
    const double dx = pieces.grid.dx();
    if (prm.space == Space::Besov) {
        double acc = 0.0, worst = 0.0;
        for (int k = 0; k <= K; ++k) {
            const double term =
                std::exp2(k * prm.s) * grid_lp(pieces.L[static_cast<std::size_t>(k)], prm.p, dx);
            if (std::isinf(prm.q))
                worst = std::max(worst, term);
            else
                acc += std::pow(term, prm.q);
        }
        return std::isinf(prm.q) ? worst : std::pow(acc, 1.0 / prm.q);
    }
    if (std::isinf(prm.p))
        throw std::invalid_argument("reference_norm: p = inf not admissible for F spaces");
    const std::size_t n = pieces.grid.samples;
    double integral = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = 0.0;
        for (int k = 0; k <= K; ++k) {
            const double v = std::fabs(pieces.L[static_cast<std::size_t>(k)][i]);
            if (v == 0.0) continue;
            const double t = std::exp2(k * prm.s) * v;
            if (std::isinf(prm.q))
                a = std::max(a, t);
            else
                a += std::pow(t, prm.q);
        }
        if (a == 0.0) continue;
        const double stack = std::isinf(prm.q) ? a : std::pow(a, 1.0 / prm.q);
        integral += std::pow(stack, prm.p) * dx;
    }
    return std::pow(integral, 1.0 / prm.p);
}

double reference_norm(const TestFunction& f, const NormParams& prm, int levels,
                      const GridSpec& grid) {
    return reference_norm_from_pieces(lp_pieces(f, levels, grid), prm);
}

double reference_norm(const TestFunction& f, const NormParams& prm, int levels) {
    return reference_norm(f, prm, levels, default_grid(f, levels));
}

double lp_reconstruct(const TestFunction& f, int levels, const GridSpec& grid) {
    // sum_k L_k(Lambda_k f) is the single multiplier sum_k phi_k lambda_k,
    // so one forward/backward pass suffices.
    const double band = std::ldexp(1.0, levels);
    if (grid.nyquist() < band) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "grid resolution insufficient for level %d: spacing %.6g required, got %.6g",
                      levels, kPi / band, grid.dx());
        throw NumericalError(msg);
    }
    Partition part;
    part.levels = levels;
    const std::size_t n = grid.samples;
    const double dx = grid.dx();

    std::vector<double> fx(n);
    for (std::size_t i = 0; i < n; ++i) fx[i] = f(grid.x_min + static_cast<double>(i) * dx);

    FftBuffers fft(n);
    for (std::size_t i = 0; i < n; ++i) {
        fft.in[i][0] = fx[i];
        fft.in[i][1] = 0.0;
    }
    fftw_execute(fft.fwd);
    std::vector<std::complex<double>> fhat(n);
    for (std::size_t i = 0; i < n; ++i) fhat[i] = {fft.out[i][0], fft.out[i][1]};
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = bin_freq(i, n, dx);
        double m = 0.0;
        for (int k = 0; k <= levels; ++k) m += part.phi_k(k, xi) * part.lambda_k(k, xi);
        const std::complex<double> v = fhat[i] * m / static_cast<double>(n);
        fft.in[i][0] = v.real();
        fft.in[i][1] = v.imag();
    }
    fftw_execute(fft.bwd);

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = fx[i] - fft.out[i][0];
        num += d * d;
        den += fx[i] * fx[i];
    }
    num = std::sqrt(num * dx);
    den = std::sqrt(den * dx);
    return den > 0.0 ? num / den : num;
}

double lp_reconstruct(const TestFunction& f, int levels) {
    return lp_reconstruct(f, levels, default_grid(f, levels));
}

void write_piece_norms_csv(std::ostream& os, const Pieces& pieces, double p) {
    os << "# levels=" << pieces.partition.levels << " c1=" << Partition::c1
       << " c2=" << Partition::c2 << " x_min=" << pieces.grid.x_min
       << " x_max=" << pieces.grid.x_max << " samples=" << pieces.grid.samples << "\n";
    os << "k,lp_norm\n";
    char buf[64];
    for (int k = 0; k <= pieces.partition.levels; ++k) {
        std::snprintf(buf, sizeof buf, "%.17g",
                      grid_lp(pieces.L[static_cast<std::size_t>(k)], p, pieces.grid.dx()));
        os << k << "," << buf << "\n";
    }
}

}  // namespace blf::lp
