#pragma once

#include "bq/dynamics.hpp"
#include "bq/geometry.hpp"
#include "bq/wannier.hpp"

namespace bq::defaults {

// Reference configuration of the study: b = 5.5 billiards inside the 13.2 x 11
// bounding rectangle, 180 x 180 evaluation grid, and the 13 x 11 x 9 x 9 Planck-cell
// lattice (N = 11583). The y cells are centered on half-integers so eleven unit cells
// tile [0, 11] exactly.
inline constexpr double kB = 5.5;
inline constexpr double kA = 0.55;
inline constexpr int kGridN = 180;
inline constexpr std::size_t kNeig = 1300;
inline constexpr double kZeta = 1.0 / kTwoPi;

inline Grid2D phase_grid() {
    return Grid2D{Grid1D{-6.6, 6.6, kGridN}, Grid1D{0.0, 11.0, kGridN}};
}

inline WannierLatticeParams lattice_x(double zeta = kZeta) {
    return WannierLatticeParams{1.0, kTwoPi, zeta, 0.0, -6, 6, -4, 4};
}

inline WannierLatticeParams lattice_y(double zeta = kZeta) {
    return WannierLatticeParams{1.0, kTwoPi, zeta, -0.5, 1, 11, -4, 4};
}

inline WannierBasis2D basis(double zeta = kZeta) {
    const Grid2D g = phase_grid();
    return WannierBasis2D::build(Wannier1D::build(lattice_x(zeta), g.gx),
                                 Wannier1D::build(lattice_y(zeta), g.gy));
}

// Fig. 3 initial packets: sigma = 1, k_y = 0, centered at (0, b); k_x tuned per billiard.
inline GaussianPacket ripple_packet() { return GaussianPacket{0.0, kB, 1.0, 6.05, 0.0}; }
inline GaussianPacket square_packet() { return GaussianPacket{0.0, kB, 1.0, kB, 0.0}; }

}  // namespace bq::defaults
