#pragma once

#include <complex>
#include <span>
#include <vector>

#include "bq/dynamics.hpp"
#include "bq/grid.hpp"
#include "bq/wannier.hpp"

namespace bq {

// Harmonic oscillator H = -d^2/dx^2 + 4 pi^2 x^2. The potential constant equals k_0^2
// of the default Planck-cell lattice (x_0 = 1, k_0 = 2 pi), so a classical orbit is a
// circle in cell coordinates: radius sqrt(E_n)/k_0 cells for both axes.
inline constexpr double kHoPotential = 4.0 * M_PI * M_PI;

struct HarmonicOscillatorSpec {
    int n = 100;
    Grid1D grid{-9.6, 9.6, 768};
};

double ho_energy(int n);  // 4 pi (n + 1/2)

// Classical-orbit radius of level n in Planck-cell units of the (x_0 = 1, k_0 = 2 pi)
// lattice: sqrt(E_n) / k_0.
double ho_circle_radius_cells(int n);

// Hermite-function eigenstate on the grid, trapezoid-normalized. Rejects grids that do
// not resolve the state's oscillations or do not contain its classical turning points.
std::vector<double> ho_eigenstate(const HarmonicOscillatorSpec& spec);

// One Gaussian frame element exp[-(x-center)^2/(4 zeta^2) + i k x] (not normalized).
struct GaussianPacket1D {
    double center = 0.0;
    double zeta = 1.0 / (2.0 * M_PI);
    double k = 0.0;
};

// Closed-form overlap integral(conj(a) * b) over the real line; validates grid quadrature.
std::complex<double> gaussian_overlap_reference(const GaussianPacket1D& a,
                                                const GaussianPacket1D& b);

// Fully analytic integrable/integrable reference: square spectrum (no numerical
// eigensolver), packet expansion, entropy series through the standard pipeline.
EntropyTimeSeries square_reference_series(const GaussianPacket& packet, double side,
                                          const WannierBasis2D& basis,
                                          std::span<const double> times);

}  // namespace bq
