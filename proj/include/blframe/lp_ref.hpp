#pragma once

#include <ostream>
#include <vector>

#include "blframe/norms.hpp"
#include "blframe/testfunction.hpp"

namespace blf::lp {

// Uniform sampling grid; samples must be a power of two.
struct GridSpec {
    double x_min = -32.0;
    double x_max = 32.0;
    std::size_t samples = 1 << 16;
    double dx() const { return (x_max - x_min) / static_cast<double>(samples); }
    double nyquist() const;  // pi / dx
};

// Smooth dyadic partition on the Fourier side. The level symbols
// phi_k(xi) = phi(2^{-k} xi) square-telescope: phi0^2 + sum phi_k^2 = 1 on
// the covered band |xi| <= 2^{K-1}; phi is supported in the annulus
// c1 <= |xi| <= c2. The reconstruction multipliers Lambda_k are the
// eta-quotients built from the squared cutoff.
struct Partition {
    int levels = 12;  // K
    static constexpr double c1 = 0.25;
    static constexpr double c2 = 1.0;

    static double eta(double xi);      // 1 on |xi| <= 1/2, 0 on |xi| >= 1, smooth
    static double phi0(double xi);     // sqrt(eta)
    static double phi_unit(double xi); // sqrt(eta(xi) - eta(2 xi))
    double phi_k(int k, double xi) const;
    double lambda_k(int k, double xi) const;
    // partition defect 1 - sum phi_k^2 at xi (0 on the covered band)
    double square_defect(double xi) const;
};

struct Pieces {
    GridSpec grid;
    Partition partition;
    std::vector<std::vector<double>> L;  // L[k], k = 0..levels, sampled on grid
    std::vector<double> f_samples;
    double grid_l2(int k) const;  // ||L_k f||_2 by grid quadrature
};

GridSpec default_grid(const TestFunction& f, int levels);

// L_k f = F^{-1}[phi_k f^]; throws NumericalError naming the required grid
// spacing when the Nyquist band does not cover level K.
Pieces lp_pieces(const TestFunction& f, int levels, const GridSpec& grid);

double reference_norm_from_pieces(const Pieces& pieces, const NormParams& prm);
double reference_norm(const TestFunction& f, const NormParams& prm, int levels,
                      const GridSpec& grid);
double reference_norm(const TestFunction& f, const NormParams& prm, int levels = 12);

// Pieces built with the Lambda multipliers instead of the L ones (used for
// the two-family norm comparison).
Pieces lambda_pieces(const TestFunction& f, int levels, const GridSpec& grid);

// || f - sum_k L_k(Lambda_k f) ||_2 / ||f||_2 on the grid (absolute when
// ||f||_2 = 0).
double lp_reconstruct(const TestFunction& f, int levels, const GridSpec& grid);
double lp_reconstruct(const TestFunction& f, int levels = 12);

void write_piece_norms_csv(std::ostream& os, const Pieces& pieces, double p);

}  // namespace blf::lp
