#include "blframe/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace blf::quad {

namespace {

Rule make_rule(int n) {
    // Newton iteration on Legendre roots over [-1, 1], then map to [0, 1].
    Rule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        r.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);  // descending roots -> ascending nodes
        r.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int npoints) {
    if (npoints < 1 || npoints > 64) throw std::invalid_argument("gauss_legendre: bad order");
    static std::map<int, Rule> cache;
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    auto it = cache.find(npoints);
    if (it == cache.end()) it = cache.emplace(npoints, make_rule(npoints)).first;
    return it->second;
}

}  // namespace blf::quad
