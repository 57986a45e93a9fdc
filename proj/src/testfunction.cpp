#include "blframe/testfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "blframe/bspline.hpp"

namespace blf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGaussianRadius = 12.0;  // effective support, in widths
constexpr int kModBumpExp = 4;

double binom_d(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// probabilists' Hermite polynomial He_k(t)
double hermite(int k, double t) {
    double h0 = 1.0, h1 = t;
    if (k == 0) return h0;
    for (int i = 1; i < k; ++i) {
        const double h2 = t * h1 - i * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

}  // namespace

TestFunction TestFunction::gaussian(double center, double width) {
    if (width <= 0) throw std::invalid_argument("gaussian: width must be positive");
    TestFunction f;
    f.family_ = Family::Gaussian;
    f.p0_ = center;
    f.p1_ = width;
    return f;
}

TestFunction TestFunction::dilated_bspline(int order, double scale, double shift) {
    if (order < 0 || scale <= 0) throw std::invalid_argument("dilated_bspline: bad parameters");
    TestFunction f;
    f.family_ = Family::DilatedBspline;
    f.ip_ = order;
    f.p0_ = scale;
    f.p1_ = shift;
    return f;
}

TestFunction TestFunction::poly_bump(int degree, double a, double b) {
    if (degree < 1 || b <= a) throw std::invalid_argument("poly_bump: bad parameters");
    TestFunction f;
    f.family_ = Family::PolyBump;
    f.ip_ = degree;
    f.p0_ = a;
    f.p1_ = b;
    return f;
}

TestFunction TestFunction::modulated_bump(double freq, double a, double b) {
    if (b <= a) throw std::invalid_argument("modulated_bump: bad parameters");
    TestFunction f;
    f.family_ = Family::ModulatedBump;
    f.p0_ = a;
    f.p1_ = b;
    f.p2_ = freq;
    f.ip_ = kModBumpExp;
    return f;
}

TestFunction TestFunction::indicator(double a, double b) {
    if (b <= a) throw std::invalid_argument("indicator: bad parameters");
    TestFunction f;
    f.family_ = Family::Indicator;
    f.p0_ = a;
    f.p1_ = b;
    return f;
}

TestFunction TestFunction::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) args.push_back(std::stod(tok));
    }
    auto need = [&](std::size_t k) {
        if (args.size() != k)
            throw std::invalid_argument("test function '" + name + "' expects " +
                                        std::to_string(k) + " parameters");
    };
    if (name == "gaussian") {
        need(2);
        return gaussian(args[0], args[1]);
    }
    if (name == "bspline") {
        need(3);
        return dilated_bspline(static_cast<int>(args[0]), args[1], args[2]);
    }
    if (name == "polybump") {
        need(3);
        return poly_bump(static_cast<int>(args[0]), args[1], args[2]);
    }
    if (name == "modbump") {
        need(3);
        return modulated_bump(args[0], args[1], args[2]);
    }
    if (name == "indicator") {
        need(2);
        return indicator(args[0], args[1]);
    }
    throw std::invalid_argument("unknown test function family '" + name + "'");
}

std::string TestFunction::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (family_) {
        case Family::Gaussian: os << "gaussian:" << p0_ << "," << p1_; break;
        case Family::DilatedBspline: os << "bspline:" << ip_ << "," << p0_ << "," << p1_; break;
        case Family::PolyBump: os << "polybump:" << ip_ << "," << p0_ << "," << p1_; break;
        case Family::ModulatedBump: os << "modbump:" << p2_ << "," << p0_ << "," << p1_; break;
        case Family::Indicator: os << "indicator:" << p0_ << "," << p1_; break;
    }
    if (amp_ != 1.0) os << " x" << amp_;
    return os.str();
}

double TestFunction::eval_base(double x) const {
    switch (family_) {
        case Family::Gaussian: {
            const double t = (x - p0_) / p1_;
            return std::exp(-0.5 * t * t);
        }
        case Family::DilatedBspline:
            return bspline::eval(ip_, p0_ * x - p1_);
        case Family::PolyBump: {
            if (x <= p0_ || x >= p1_) return 0.0;
            const double u = 4.0 * (x - p0_) * (p1_ - x) / ((p1_ - p0_) * (p1_ - p0_));
            return std::pow(u, ip_);
        }
        case Family::ModulatedBump: {
            if (x <= p0_ || x >= p1_) return 0.0;
            const double u = 4.0 * (x - p0_) * (p1_ - x) / ((p1_ - p0_) * (p1_ - p0_));
            return std::cos(p2_ * (x - 0.5 * (p0_ + p1_))) * std::pow(u, ip_);
        }
        case Family::Indicator:
            return (x >= p0_ && x < p1_) ? 1.0 : 0.0;
    }
    return 0.0;
}

double TestFunction::operator()(double x) const { return amp_ * eval_base(x); }

int TestFunction::max_weak_order() const {
    switch (family_) {
        case Family::Gaussian: return std::numeric_limits<int>::max();
        case Family::DilatedBspline: return ip_;
        case Family::PolyBump: return ip_;
        case Family::ModulatedBump: return ip_;
        case Family::Indicator: return 0;
    }
    return 0;
}

int TestFunction::smoothness() const {
    switch (family_) {
        case Family::Gaussian: return std::numeric_limits<int>::max();
        case Family::Indicator: return -1;
        default: return std::max(-1, max_weak_order() - 1);
    }
}

double TestFunction::derivative(double x, int k) const {
    if (k == 0) return (*this)(x);
    if (k < 0 || k > max_weak_order())
        throw std::invalid_argument("derivative of order " + std::to_string(k) +
                                    " unavailable for " + describe());
    switch (family_) {
        case Family::Gaussian: {
            const double t = (x - p0_) / p1_;
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            return amp_ * sign * hermite(k, t) * std::exp(-0.5 * t * t) /
                   std::pow(p1_, static_cast<double>(k));
        }
        case Family::DilatedBspline:
        case Family::PolyBump:
        case Family::Indicator:
            return ensure_pp()->derivative_at(x, k);
        case Family::ModulatedBump: {
            if (x <= p0_ || x >= p1_) return 0.0;
            // product rule: cos factor x window polynomial
            const PiecewisePoly* w = ensure_pp_window();
            double s = 0.0;
            for (int i = 0; i <= k; ++i) {
                const double trig =
                    std::pow(p2_, static_cast<double>(i)) *
                    std::cos(p2_ * (x - 0.5 * (p0_ + p1_)) + 0.5 * kPi * i);
                s += binom_d(k, i) * trig * w->derivative_at(x, k - i);
            }
            return amp_ * s;
        }
    }
    return 0.0;
}

const PiecewisePoly* TestFunction::ensure_pp() const {
    if (pp_) return &*pp_;
    switch (family_) {
        case Family::DilatedBspline:
            pp_ = bspline::piecewise(ip_).precompose_affine(p0_, p1_).scaled(amp_);
            break;
        case Family::Indicator:
            pp_ = PiecewisePoly{p1_ - p0_, p0_, {{amp_}}};
            break;
        case Family::PolyBump: {
            // (c2 (x-a)(b-x))^d expanded around a: u = t (L - t) c2, t local
            const double L = p1_ - p0_;
            const double c2 = 4.0 / (L * L);
            // poly in t: (c2 L t - c2 t^2)^d
            std::vector<double> base{0.0, c2 * L, -c2};
            std::vector<double> acc{1.0};
            for (int i = 0; i < ip_; ++i) {
                std::vector<double> nxt(acc.size() + 2, 0.0);
                for (std::size_t j = 0; j < acc.size(); ++j)
                    for (std::size_t k = 0; k < 3; ++k) nxt[j + k] += acc[j] * base[k];
                acc = std::move(nxt);
            }
            for (auto& v : acc) v *= amp_;
            pp_ = PiecewisePoly{L, p0_, {acc}};
            break;
        }
        default:
            return nullptr;
    }
    return &*pp_;
}

// window polynomial of the modulated bump (amplitude excluded)
const PiecewisePoly* TestFunction::ensure_pp_window() const {
    if (win_pp_) return &*win_pp_;
    const double L = p1_ - p0_;
    const double c2 = 4.0 / (L * L);
    std::vector<double> base{0.0, c2 * L, -c2};
    std::vector<double> acc{1.0};
    for (int i = 0; i < ip_; ++i) {
        std::vector<double> nxt(acc.size() + 2, 0.0);
        for (std::size_t j = 0; j < acc.size(); ++j)
            for (std::size_t k = 0; k < 3; ++k) nxt[j + k] += acc[j] * base[k];
        acc = std::move(nxt);
    }
    win_pp_ = PiecewisePoly{L, p0_, {acc}};
    return &*win_pp_;
}

const PiecewisePoly* TestFunction::piecewise() const {
    switch (family_) {
        case Family::DilatedBspline:
        case Family::PolyBump:
        case Family::Indicator:
            return ensure_pp();
        default:
            return nullptr;
    }
}

bool TestFunction::compact_support() const { return family_ != Family::Gaussian; }

double TestFunction::support_min() const {
    switch (family_) {
        case Family::Gaussian: return p0_ - kGaussianRadius * p1_;
        case Family::DilatedBspline: return p1_ / p0_;
        default: return p0_;
    }
}

double TestFunction::support_max() const {
    switch (family_) {
        case Family::Gaussian: return p0_ + kGaussianRadius * p1_;
        case Family::DilatedBspline: return (p1_ + ip_ + 1) / p0_;
        default: return p1_;
    }
}

std::vector<double> TestFunction::breakpoints() const {
    switch (family_) {
        case Family::Gaussian: return {};
        case Family::DilatedBspline: {
            std::vector<double> b;
            for (int k = 0; k <= ip_ + 1; ++k) b.push_back((p1_ + k) / p0_);
            return b;
        }
        default: return {p0_, p1_};
    }
}

double TestFunction::feature_scale() const {
    switch (family_) {
        case Family::Gaussian: return p1_;
        case Family::DilatedBspline: return 1.0 / p0_;
        case Family::PolyBump: return (p1_ - p0_) / (2.0 + ip_);
        case Family::ModulatedBump: {
            const double win = (p1_ - p0_) / (2.0 + ip_);
            const double osc = p2_ > 0 ? 2.0 * kPi / (8.0 * p2_) : win;
            return std::min(win, osc);
        }
        case Family::Indicator: return p1_ - p0_;
    }
    return 1.0;
}

std::optional<std::complex<double>> TestFunction::fourier(double xi) const {
    using namespace std::complex_literals;
    switch (family_) {
        case Family::Gaussian: {
            const double mag = p1_ * std::sqrt(2.0 * kPi) * std::exp(-0.5 * p1_ * p1_ * xi * xi);
            return amp_ * mag * std::exp(-1.0i * p0_ * xi);
        }
        case Family::DilatedBspline:
            return amp_ / p0_ * std::exp(-1.0i * (p1_ / p0_) * xi) * bspline::fourier(ip_, xi / p0_);
        case Family::Indicator: {
            if (xi == 0.0) return std::complex<double>(amp_ * (p1_ - p0_), 0.0);
            return amp_ * (std::exp(-1.0i * p0_ * xi) - std::exp(-1.0i * p1_ * xi)) / (1.0i * xi);
        }
        default:
            return std::nullopt;
    }
}

double TestFunction::l1_bound() const {
    switch (family_) {
        case Family::Gaussian: return std::fabs(amp_) * p1_ * std::sqrt(2.0 * kPi);
        case Family::DilatedBspline: return std::fabs(amp_) / p0_;
        default: return std::fabs(amp_) * (p1_ - p0_);
    }
}

double TestFunction::l1_tail() const {
    if (family_ != Family::Gaussian) return 0.0;
    return std::fabs(amp_) * p1_ * std::sqrt(2.0 * kPi) * std::erfc(kGaussianRadius / std::sqrt(2.0));
}

double TestFunction::sup_bound() const { return std::fabs(amp_); }

double TestFunction::deriv_sup(int k) const {
    const double a = support_min(), b = support_max();
    const int n = 4096;
    double best = 0.0, bx = a;
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double v = std::fabs(derivative(x, k));
        if (v > best) {
            best = v;
            bx = x;
        }
    }
    // one parabolic refinement around the sampled peak
    const double h = (b - a) / n;
    const double vm = std::fabs(derivative(std::max(a, bx - h), k));
    const double vp = std::fabs(derivative(std::min(b, bx + h), k));
    const double denom = vm - 2 * best + vp;
    if (denom < 0) {
        const double dx = 0.5 * h * (vm - vp) / denom;
        best = std::max(best, std::fabs(derivative(bx + dx, k)));
    }
    return best;
}

TestFunction TestFunction::dilated(int m) const {
    if (m == 0) return *this;
    const double c = std::ldexp(1.0, m);
    TestFunction f = *this;
    f.pp_.reset();
    switch (family_) {
        case Family::Gaussian:
            f.p0_ = p0_ / c;
            f.p1_ = p1_ / c;
            break;
        case Family::DilatedBspline:
            f.p0_ = p0_ * c;
            break;
        case Family::ModulatedBump:
            f.p2_ = p2_ * c;
            [[fallthrough]];
        case Family::PolyBump:
        case Family::Indicator:
            f.p0_ = p0_ / c;
            f.p1_ = p1_ / c;
            break;
    }
    return f;
}

TestFunction TestFunction::scaled(double alpha) const {
    TestFunction f = *this;
    f.amp_ *= alpha;
    f.pp_.reset();
    return f;
}

}  // namespace blf
