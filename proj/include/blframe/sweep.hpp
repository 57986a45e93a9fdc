#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "blframe/lp_ref.hpp"
#include "blframe/norms.hpp"

namespace blf::sweep {

struct Point {
    double s = 0.0, p = 2.0, q = 2.0;
};

// Deterministic grid of >= 12 admissible (s,p,q) points for the frame
// theorem at this order, at least three of them with n < s < n+1 (beyond the
// unconditional-basis range).
std::vector<Point> grid_points(Space space, int order);

// Smooth suite used by the equivalence sweeps; every member lies in the
// tested spaces for all orders up to 2.
std::vector<TestFunction> default_suite();

struct Row {
    Space space = Space::Besov;
    int order = 0;
    Point pt;
    std::string fn;
    int dilation = 0;
    double frame = 0.0;
    double reference = 0.0;
};

std::vector<Row> run_sweep(const SplineSystem& sys, Space space,
                           std::span<const TestFunction> suite, int dilation_max,
                           int j_max_base = 8, int levels_base = 10);

void write_csv(std::ostream& os, std::span<const Row> rows);

struct EndpointRow {
    int order = 0;
    double p = 2.0;
    std::string fn;
    int dilation = 0;
    double frame_endpoint = 0.0;
    double sobolev = 0.0;
};

// Theorem-1.3 comparison rows: the endpoint frame quantity against the
// W^{n+1}_p reference norm.
std::vector<EndpointRow> run_endpoint(const SplineSystem& sys, std::span<const double> ps,
                                      std::span<const TestFunction> suite, int dilation_max,
                                      int j_max = 10);

void write_endpoint_csv(std::ostream& os, std::span<const EndpointRow> rows);

}  // namespace blf::sweep
