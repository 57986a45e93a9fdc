#pragma once

#include <limits>
#include <optional>
#include <string>

#include <json.hpp>

#include "blframe/coefficients.hpp"

namespace blf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Space { Besov, TriebelLizorkin, SobolevEndpoint };

struct NormParams {
    double s = 0.0;
    double p = 2.0;  // in (0, inf]
    double q = 2.0;  // in (0, inf]
    Space space = Space::Besov;
    int order = 0;  // system order n
};

enum class RangeClass { FrameValid, BasisValid, Both, Outside };

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool nonempty() const { return lo < hi; }
    bool contains(double s) const { return s > lo && s < hi; }
    std::string str() const;
};

struct RangeInfo {
    RangeClass cls = RangeClass::Outside;
    std::optional<Interval> frame_s;  // admissible s when (p,q) admit the frame theorem
    std::optional<Interval> basis_s;  // admissible s for the unconditional-basis theorem
    std::string detail;
};

// Classifies (s,p,q) against the frame theorems and the unconditional-basis
// ranges; for the Sobolev endpoint it checks 1 < p <= inf and n >= 1.
RangeInfo validate_range(const NormParams& prm);

// Sign-carrying coefficient table, same jagged layout as FrameCoefficients.
struct CoefficientTable {
    std::vector<ScaleRow> rows;  // rows[0] is scale j = -1
    int j_max() const { return static_cast<int>(rows.size()) - 2; }
    const ScaleRow& row(int j) const { return rows[static_cast<std::size_t>(j + 1)]; }
    double value(int j, long mu) const { return row(j).at(mu); }
    static CoefficientTable from_frame(const FrameCoefficients& fc);
    CoefficientTable shifted(long m) const;  // omega_{j,mu} -> omega_{j,mu+m}
};

// b^s_{p,q} norm of the table (usual sup modifications at p or q = inf).
double seq_norm_besov(const CoefficientTable& w, const NormParams& prm);
// f^s_{p,q} norm, evaluated exactly on the finest dyadic grid; p = inf rejected.
double seq_norm_triebel(const CoefficientTable& w, const NormParams& prm);
// sup_j 2^{j(n+1-1/p)} ell_p rows (the endpoint norm of the order-(n+1) space)
double seq_norm_sobolev_endpoint(const CoefficientTable& w, const NormParams& prm);
double seq_norm(const CoefficientTable& w, const NormParams& prm);

struct FrameNormResult {
    double value = 0.0;
    double tail_remainder = std::numeric_limits<double>::quiet_NaN();
    RangeInfo range;
    FrameCoefficients coeffs;
    nlohmann::json report(const std::string& fn_desc) const;
};

// Frame coefficients composed with the matching sequence norm; throws
// RangeError (message quotes the admissible interval) when outside.
FrameNormResult frame_norm(const TestFunction& f, const SplineSystem& sys,
                           const NormParams& prm, int j_max = 8, double tol = 1e-10,
                           const PairOptions& opt = {});

// ||f||_{L_p} + ||f^{(k)}||_{L_p} by quadrature / exact piecewise integration.
double sobolev_reference_norm(const TestFunction& f, double p, int k);

// L_p norm of f^{(k)} alone (k = 0 gives ||f||_p).
double lp_norm_deriv(const TestFunction& f, double p, int k);

// Non-oversampled (basis-regime) coefficient table: omega_{j,mu} =
// 2^j (f, psi_{j,mu}), with the sqrt(2)-normalized scaling row at j = -1.
CoefficientTable basis_coefficients(const TestFunction& f, const SplineSystem& sys,
                                    int j_max = 8, double tol = 1e-10);

}  // namespace blf
