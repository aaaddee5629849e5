#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bq/geometry.hpp"
#include "bq/grid.hpp"

namespace bq {

// A wave function sampled on a uniform grid, together with that grid.
struct GridField {
    Grid2D grid;
    std::vector<std::complex<double>> values;

    double norm2() const;  // trapezoid quadrature of |psi|^2
    void normalize();
};

// Spectrum sampled on a uniform evaluation grid: the interchange form consumed by
// the phase-space and dynamics pipelines and by the BQSPEC1 cache file. Each field
// is trapezoid-normalized on `grid`.
struct GridSpectrum {
    Grid2D grid;
    double b = 0.0, a = 0.0;  // geometry the spectrum was computed on (a < 0: not a billiard)
    std::vector<double> energies;
    std::vector<double> fields;  // [n][grid.size()] row-major

    std::size_t n_eig() const { return energies.size(); }
    std::span<const double> field(std::size_t n) const {
        return {fields.data() + n * grid.size(), grid.size()};
    }
    std::span<double> field(std::size_t n) {
        return {fields.data() + n * grid.size(), grid.size()};
    }
};

struct ValidationReport {
    double max_norm_residual = 0.0;    // max |quad(phi_n^2) - 1|
    double max_ortho_residual = 0.0;   // max |quad(phi_m phi_n)|, m != n
    double max_boundary_leak = 0.0;    // max per-state quadrature mass outside the mask
    double weyl_max_rel_dev = 0.0;     // max |N(E) - Weyl(E)| / Weyl(E) over the probe window
    std::vector<std::pair<double, double>> weyl_curve;  // (E, relative deviation)
    std::vector<std::size_t> flagged;  // indices failing normalization/boundary checks
    bool ok = true;
    std::string summary() const;
};

// Two-term Weyl estimate N(E) ~ (Area*E - Perimeter*sqrt(E)) / (4*pi).
double weyl_estimate(double area, double perimeter, double energy);

// Counts eigenvalues <= energy (energies ascending).
std::size_t level_count(const std::vector<double>& energies, double energy);

// Report-only audit of a sampled spectrum against its geometry: grid normalization and
// orthogonality residuals, boundary leak per state, and the Weyl deviation curve.
// Orthogonality is probed on `ortho_pairs` deterministic pairs (0 = all pairs).
ValidationReport verify_spectrum(const GridSpectrum& spec, const BilliardGeometry& geom,
                                 std::size_t ortho_pairs = 4000, double e_lo = 20.0,
                                 double e_hi = 100.0);

using ComplexField2D = std::function<std::complex<double>(double, double)>;

}  // namespace bq
