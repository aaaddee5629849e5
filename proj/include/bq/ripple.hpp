#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include "bq/geometry.hpp"
#include "bq/spectral.hpp"

namespace bq {

// Dirichlet eigenproblem of -laplacian on the ripple domain, solved by a Galerkin
// expansion in the double sine basis of the straightened frame s = x * b / (b - a cos(pi y/b)).
// The quadratic form separates into 1D integral tables, block-diagonalizes into the four
// (x, y) parity sectors, and each sector is a dense generalized symmetric eigenproblem.
class RippleSpectrum {
public:
    struct Options {
        std::size_t n_eig = 1300;
        std::size_t cap = 1300;         // configured production cap
        int basis_m = 0;                // sine modes per direction; 0 = auto from n_eig
        int basis_n = 0;
        bool certify = false;           // re-solve with a 1.5x basis, eigenvalues only
        double certify_factor = 1.5;
        double certify_tol = 1e-3;      // relative shift of the certificate level
        int quad_order = 8;             // Gauss-Legendre order per panel
    };

    struct Certificate {
        int basis_m = 0, basis_n = 0;           // production basis
        int refined_m = 0, refined_n = 0;
        std::size_t level = 0;                  // level compared (min(n_eig, 1200), 1-based)
        double rel_shift = 0.0;
        bool passed = false;
    };

    static RippleSpectrum solve(const BilliardGeometry& geom, const Options& opt);

    std::size_t n_eig() const { return energies_.size(); }
    double energy(std::size_t n) const { return energies_[n]; }
    const std::vector<double>& energies() const { return energies_; }
    const BilliardGeometry& geometry() const { return geom_; }
    int basis_m() const { return m_; }
    int basis_n() const { return n_; }
    const std::optional<Certificate>& certificate() const { return cert_; }

    // Sample eigenfunction n on a uniform grid (hard zero outside the domain);
    // values carry the solver normalization, not the grid trapezoid normalization.
    void eval_field(std::size_t n, const Grid2D& grid, double* out) const;

    // Expansion coefficients <phi_n|psi> via the solver-native quadrature (the state is
    // masked to the domain and normalized under that quadrature first).
    std::vector<std::complex<double>> expand(const ComplexField2D& psi) const;

    // Full Gram matrix residuals of the first `count` states under the solver-native
    // quadrature: returns {max |<n|n>-1|, max |<m|n>|, m != n}.
    std::pair<double, double> gram_residuals(std::size_t count = 0) const;

    GridSpectrum sample(const Grid2D& grid, std::size_t n_eig) const;
    GridSpectrum sample(std::size_t n_eig) const;  // on the geometry's own grid

private:
    BilliardGeometry geom_ = BilliardGeometry::build(1.0, 0.0, 64, 64);
    int m_ = 0, n_ = 0;
    std::vector<double> energies_;
    std::vector<double> coeff_;  // [state][m * basis_n + n] row-major
    QuadRule1D qs_, qy_;         // solver-native quadrature (straightened frame)
    std::optional<Certificate> cert_;

    const double* coeff_row(std::size_t n) const { return coeff_.data() + n * (std::size_t(m_) * n_); }
};

}  // namespace bq
