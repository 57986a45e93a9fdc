#pragma once

#include <span>
#include <vector>

namespace blf::quad {

// Gauss-Legendre rule on [0, 1]; exact for polynomials of degree 2n-1.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const Rule& gauss_legendre(int npoints);

}  // namespace blf::quad
