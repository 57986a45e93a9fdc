#pragma once

#include <ostream>
#include <vector>

#include "blframe/blsystem.hpp"
#include "blframe/pairing.hpp"
#include "blframe/testfunction.hpp"

namespace blf {

struct ScaleRow {
    long mu_first = 0;
    std::vector<double> values;
    double at(long mu) const {
        const long i = mu - mu_first;
        if (i < 0 || i >= static_cast<long>(values.size())) return 0.0;
        return values[static_cast<std::size_t>(i)];
    }
    long mu_last() const { return mu_first + static_cast<long>(values.size()) - 1; }
};

// The oversampled frame coefficient table s_{j,mu}(f) for j = -1..j_max:
// s_{j,mu} = 2^j |(f, psi~_{j,2mu})| + 2^j |(f, psi~_{j,2mu+1})| at j >= 0 and
// s_{-1,mu} = |(f, Psi(.-mu))|. Values are nonnegative; windows cover every
// coefficient above the tail tolerance, and tail_bound certifies the rest.
struct FrameCoefficients {
    int order = 0;
    int j_max = -1;
    double tol = 0.0;
    double tail_bound = 0.0;
    std::vector<ScaleRow> rows;  // rows[0] is scale j = -1

    const ScaleRow& row(int j) const { return rows[static_cast<std::size_t>(j + 1)]; }
    double value(int j, long mu) const { return row(j).at(mu); }
    void write_csv(std::ostream& os) const;
};

FrameCoefficients frame_coefficients(const TestFunction& f, const SplineSystem& sys,
                                     int j_max = 8, double tol = 1e-10,
                                     const PairOptions& opt = {});

// Raw pairing row 2^{j_+} (f, psi~_{j,nu}) over the certified window of scale
// j; used by the coefficient assembly and the basis-regime cross-checks.
ScaleRow oversampled_row(const TestFunction& f, const SplineSystem& sys, int j,
                         double tol, const PairOptions& opt = {});

}  // namespace blf
