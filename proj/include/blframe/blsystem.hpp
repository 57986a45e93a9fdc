#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "blframe/piecewise.hpp"

namespace blf {

// Exponential envelope constants: |f(k)| <= C e^{-gamma |k|}. compact is set
// when every sample beyond some index is exactly zero.
struct DecayFit {
    double C = 0.0;
    double gamma = 0.0;
    bool compact = false;
};

// Log-linear regression of log|v| against |k| over |k| >= k0, exact zeros
// excluded. Returns nullopt when fewer than 8 usable samples remain and the
// data is not compactly supported.
std::optional<DecayFit> decay_fit(std::span<const double> abscissae,
                                  std::span<const double> values, double k0 = 2.0);

struct DyadicIndex {
    int j = 0;
    long mu = 0;
};

enum class MemberKind {
    Scaling,      // Psi(x)
    Wavelet,      // psi(x)
    Dyadic,       // psi(2^j x - mu), j >= 0; sqrt(2) Psi(x - mu) at j = -1
    Oversampled,  // psi(2^j x - mu/2), j >= 0; Psi(x - mu) at j = -1
    Base,         // Psi(x - mu)
};

// The classical Battle-Lemarie pair of order n in truncated piecewise form.
//
// For n >= 1 the scaling coefficients d (Psi = sum d_k B_n(.-k)) are read
// off the 2pi-periodic symbol E_n(xi)^{-1/2}; the wavelet coefficients e
// (psi = sum e_k B_n(2.-k)) come from the quadrature-mirror flip of the
// low-pass symbol. Order 0 is the exact Haar pair.
class SplineSystem {
public:
    struct BuildParams {
        int order = 1;
        int trunc = -1;           // coefficient half-width K; -1 selects by tail mass
        int symbol_samples = 8192;  // N, power of two >= 1024
    };

    static SplineSystem build(const BuildParams& p);
    static SplineSystem build(int order) { return build(BuildParams{.order = order}); }

    int order() const { return order_; }
    int trunc() const { return trunc_; }
    int symbol_samples() const { return symbol_samples_; }
    // coefficient for shift k; zero outside the stored window
    double scaling_coeff(long k) const { return coeff(d_, d_first_, k); }
    double wavelet_coeff(long k) const { return coeff(e_, e_first_, k); }
    std::span<const double> scaling_coeffs() const { return d_; }
    std::span<const double> wavelet_coeffs() const { return e_; }
    long scaling_first() const { return d_first_; }
    long wavelet_first() const { return e_first_; }

    const PiecewisePoly& scaling_pp() const { return scaling_pp_; }
    const PiecewisePoly& wavelet_pp() const { return wavelet_pp_; }
    const DecayFit& decay() const { return decay_; }
    double truncation_tail() const { return truncation_tail_; }

    double eval_member(MemberKind kind, DyadicIndex idx, double x) const;
    PiecewisePoly member_pp(MemberKind kind, DyadicIndex idx) const;

    // Coefficients A^0..A^n of the piece on [(mu-1)/2, mu/2] re-expanded
    // around mu/2; zero vector when mu is outside the window.
    std::vector<double> piecewise_coefficients(bool wavelet, long mu) const;

    // Moments int x^kappa f dx for kappa = 0..kappa_max (<= 2n+4).
    std::vector<double> moments(bool wavelet, int kappa_max) const;

    // rho with rho^{(n+1)}(2x) = psi(x), realized through the Fourier-side
    // relation rho^(xi) = 2 (i xi)^{-(n+1)} psi^(2 xi); the singular factor
    // cancels against the (n+1)-fold zero of the wavelet symbol, leaving a
    // smooth periodic symbol whose coefficients expand rho over B_{2n+1}.
    PiecewisePoly antiderivative_rho() const;

    nlohmann::json to_json() const;
    static SplineSystem from_json(const nlohmann::json& j);

private:
    static double coeff(const std::vector<double>& c, long first, long k) {
        const long i = k - first;
        if (i < 0 || i >= static_cast<long>(c.size())) return 0.0;
        return c[static_cast<std::size_t>(i)];
    }
    void finalize();  // builds piecewise forms + decay fit from coefficients

    int order_ = 0;
    int trunc_ = 0;
    int symbol_samples_ = 0;
    std::vector<double> d_, e_;
    long d_first_ = 0, e_first_ = 0;
    PiecewisePoly scaling_pp_, wavelet_pp_;
    DecayFit decay_;
    double truncation_tail_ = 0.0;
};

}  // namespace blf
