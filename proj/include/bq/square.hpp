#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "bq/spectral.hpp"

namespace bq {

// Analytic Dirichlet spectrum of the square billiard of side `side` with lower-left
// corner at (x0, y0): E = pi^2 (p^2 + q^2) / side^2, phi = (2/side) sin(p pi u/side)
// sin(q pi v/side). Degenerate pairs are ordered lexicographically by (p, q).
class SquareSpectrum {
public:
    static SquareSpectrum solve(double side, double x0, double y0, std::size_t n_eig,
                                std::size_t cap = 20000);

    std::size_t n_eig() const { return energies_.size(); }
    double energy(std::size_t n) const { return energies_[n]; }
    const std::vector<double>& energies() const { return energies_; }
    std::pair<int, int> mode(std::size_t n) const { return modes_[n]; }
    double side() const { return side_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }

    // Sample eigenfunction n on a uniform grid; zero outside the square. Values carry
    // the analytic 2/side normalization (renormalize per grid if needed).
    void eval_field(std::size_t n, const Grid2D& grid, double* out) const;

    // Expansion coefficients <phi_n|psi> of a state via the solver-native aligned grid
    // (psi is masked to the square and normalized on that grid first).
    std::vector<std::complex<double>> expand(const ComplexField2D& psi) const;

    // Aligned uniform grid on the square used by expand(); sine products are exactly
    // orthogonal under its trapezoid rule.
    Grid2D native_grid() const;

    GridSpectrum sample(const Grid2D& grid, std::size_t n_eig) const;

private:
    double side_ = 0.0, x0_ = 0.0, y0_ = 0.0;
    std::vector<double> energies_;
    std::vector<std::pair<int, int>> modes_;
    int native_intervals_ = 256;
};

}  // namespace bq
