#include "blframe/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace blf::sweep {

namespace {

double interval_lo(Space space, int order, double p, double q) {
    const auto inv = [](double v) { return std::isinf(v) ? 0.0 : 1.0 / v; };
    if (space == Space::Besov) return inv(p) - 1.0 - order;
    return std::max(inv(p), inv(q)) - 1.0 - order;
}

}  // namespace

std::vector<Point> grid_points(Space space, int order) {
    const double n = order;
    std::vector<std::pair<double, double>> pq;
    if (space == Space::Besov)
        pq = {{2.0, 2.0}, {1.0, 1.0}, {3.0, 1.5}, {kInf, 2.0}};
    else
        pq = {{2.0, 2.0}, {1.5, 1.2}, {1.2, 2.5}, {0.8, 1.5}};

    std::vector<Point> pts;
    int high_count = 0;
    for (const auto& [p, q] : pq) {
        const double lo = interval_lo(space, order, p, q);
        const double hi = n + 1.0;
        double fracs[3] = {0.30, 0.55, 0.80};
        for (double fr : fracs) {
            const double s = lo + fr * (hi - lo);
            pts.push_back({s, p, q});
            if (s > n && s < n + 1.0) ++high_count;
        }
    }
    // guarantee at least three points beyond the basis range
    const double high_s[3] = {n + 0.35, n + 0.55, n + 0.75};
    for (int i = 0; high_count < 3 && i < 3; ++i) {
        auto& pt = pts[static_cast<std::size_t>(3 * i)];
        if (!(pt.s > n && pt.s < n + 1.0)) {
            pt.s = high_s[i];
            ++high_count;
        }
    }
    return pts;
}

std::vector<TestFunction> default_suite() {
    return {TestFunction::gaussian(0.0, 1.0),
            TestFunction::gaussian(0.3, 0.5),
            TestFunction::dilated_bspline(4, 1.0, -2.0),
            TestFunction::dilated_bspline(5, 2.0, 0.0),
            TestFunction::poly_bump(6, -1.0, 1.0),
            TestFunction::modulated_bump(9.5, -1.0, 1.0)};
}

std::vector<Row> run_sweep(const SplineSystem& sys, Space space,
                           std::span<const TestFunction> suite, int dilation_max,
                           int j_max_base, int levels_base) {
    const std::vector<Point> pts = grid_points(space, sys.order());
    std::vector<Row> rows;
    for (const TestFunction& f : suite) {
        for (int m = 0; m <= dilation_max; ++m) {
            const TestFunction fd = f.dilated(m);
            const int j_max = j_max_base + m;
            const int levels = levels_base + m;
            const FrameCoefficients table = frame_coefficients(fd, sys, j_max, 1e-10);
            const CoefficientTable w = CoefficientTable::from_frame(table);
            const lp::Pieces pieces = lp::lp_pieces(fd, levels, lp::default_grid(fd, levels));
            for (const Point& pt : pts) {
                NormParams prm{pt.s, pt.p, pt.q, space, sys.order()};
                Row r;
                r.space = space;
                r.order = sys.order();
                r.pt = pt;
                r.fn = f.describe();
                r.dilation = m;
                r.frame = seq_norm(w, prm);
                r.reference = lp::reference_norm_from_pieces(pieces, prm);
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

void write_csv(std::ostream& os, std::span<const Row> rows) {
    os << "space,order,s,p,q,fn,dilation,frame_norm,reference_norm,ratio\n";
    char buf[256];
    for (const Row& r : rows) {
        const double ratio = r.reference > 0 ? r.frame / r.reference : 0.0;
        std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%.17g,%s,%d,%.17g,%.17g,%.17g\n",
                      r.space == Space::Besov ? "besov" : "triebel", r.order, r.pt.s, r.pt.p,
                      r.pt.q, r.fn.c_str(), r.dilation, r.frame, r.reference, ratio);
        os << buf;
    }
}

std::vector<EndpointRow> run_endpoint(const SplineSystem& sys, std::span<const double> ps,
                                      std::span<const TestFunction> suite, int dilation_max,
                                      int j_max) {
    const int n = sys.order();
    std::vector<EndpointRow> rows;
    for (const TestFunction& f : suite) {
        for (int m = 0; m <= dilation_max; ++m) {
            const TestFunction fd = f.dilated(m);
            const FrameCoefficients table = frame_coefficients(fd, sys, j_max + m, 1e-10);
            const CoefficientTable w = CoefficientTable::from_frame(table);
            for (double p : ps) {
                EndpointRow r;
                r.order = n;
                r.p = p;
                r.fn = f.describe();
                r.dilation = m;
                r.frame_endpoint =
                    seq_norm_sobolev_endpoint(w, NormParams{0.0, p, kInf,
                                                            Space::SobolevEndpoint, n});
                r.sobolev = sobolev_reference_norm(fd, p, n + 1);
                rows.push_back(std::move(r));
            }
        }
    }
    return rows;
}

void write_endpoint_csv(std::ostream& os, std::span<const EndpointRow> rows) {
    os << "order,p,fn,dilation,frame_endpoint,sobolev_norm,ratio\n";
    char buf[256];
    for (const EndpointRow& r : rows) {
        const double ratio = r.sobolev > 0 ? r.frame_endpoint / r.sobolev : 0.0;
        std::snprintf(buf, sizeof buf, "%d,%.17g,%s,%d,%.17g,%.17g,%.17g\n", r.order, r.p,
                      r.fn.c_str(), r.dilation, r.frame_endpoint, r.sobolev, ratio);
        os << buf;
    }
}

}  // namespace blf::sweep
