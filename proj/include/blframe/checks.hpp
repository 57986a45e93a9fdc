#pragma once

#include <json.hpp>

#include "blframe/blsystem.hpp"

namespace blf::checks {

// Construction validity against the defining conditions of the system:
// orthonormality, vanishing moments, global smoothness, decay, scale-space
// membership.
struct ConstructionReport {
    int order = 0;
    double ortho_residual = 0.0;   // max |(g_{j,mu}, g_{k,nu}) - 2^{-j} dd|
    double moment_max = 0.0;       // moments 0..n of psi
    double knot_mismatch = 0.0;    // worst one-sided derivative gap, orders 0..n-1
    double gamma = 0.0;            // fitted decay rate
    double envelope_excess = 0.0;  // max |f(x)| e^{gamma|x|} / C0 - 1 over signal knots
    double mra_residual = 0.0;     // shift-basis representation residual
    double truncation_tail = 0.0;

    bool pass() const;
    nlohmann::json to_json() const;
};

ConstructionReport construction_report(const SplineSystem& sys, int scale_min = -1,
                                       int scale_max = 3, int mu_halfwidth = 3,
                                       int nu_halfwidth = 8);

// Max pointwise deviation of the order-0 wavelet from the reference
// square-wave pair over npoints samples, minimized over integer shifts and
// sign.
double haar_anchor(const SplineSystem& sys, int npoints = 1000);

// Lemma on adjacent polynomial pieces: non-leading Taylor coefficients agree
// across each half-integer knot; leading ones obey the decay envelope.
struct PieceCoefficientReport {
    double nonleading_mismatch = 0.0;
    double envelope_margin = 0.0;  // min over mu of bound/|A^n_mu| (>= 1 means pass)
};

PieceCoefficientReport piece_coefficient_report(const SplineSystem& sys, bool wavelet,
                                                long mu_halfwidth = 20);

}  // namespace blf::checks
