#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bq/grid.hpp"
#include "bq/spectral.hpp"

namespace bq {

inline constexpr double kTwoPi = 2.0 * M_PI;

// Gaussian lattice parameters for one axis of phase space. Completeness of the
// lattice requires x0 * k0 = 2*pi exactly.
struct WannierLatticeParams {
    double x0 = 1.0;
    double k0 = kTwoPi;
    double zeta = 1.0 / kTwoPi;
    double pos_offset = 0.0;         // position of cell j is pos_offset + j * x0
    int j_pos_lo = 0, j_pos_hi = 0;  // inclusive position index range
    int j_mom_lo = 0, j_mom_hi = 0;  // inclusive momentum index range

    int n_pos() const { return j_pos_hi - j_pos_lo + 1; }
    int n_mom() const { return j_mom_hi - j_mom_lo + 1; }
    int n_funcs() const { return n_pos() * n_mom(); }
    void validate() const;
};

// 1D Planck-cell basis: Loewdin (symmetric) orthogonalization of the Gaussian frame
// under the trapezoid inner product of `grid`, so grid orthonormality is exact by
// construction. Functions are stored split (re, im), one row per (j_pos, j_mom).
class Wannier1D {
public:
    static Wannier1D build(const WannierLatticeParams& params, const Grid1D& grid);

    // Rehydrate from cached rows (no orthogonalization); validity is the caller's
    // contract, revalidate via gram_residual() after loading.
    static Wannier1D from_raw(const WannierLatticeParams& params, const Grid1D& grid,
                              std::vector<double> re, std::vector<double> im, double cond);

    const WannierLatticeParams& params() const { return params_; }
    const Grid1D& grid() const { return grid_; }
    int n_funcs() const { return params_.n_funcs(); }
    // Row index of cell (j_pos, j_mom); momentum fastest.
    int index(int j_pos, int j_mom) const {
        return (j_pos - params_.j_pos_lo) * params_.n_mom() + (j_mom - params_.j_mom_lo);
    }
    std::span<const double> re(int f) const { return {re_.data() + std::size_t(f) * grid_.n, std::size_t(grid_.n)}; }
    std::span<const double> im(int f) const { return {im_.data() + std::size_t(f) * grid_.n, std::size_t(grid_.n)}; }

    double gram_residual() const;      // max |<w_i|w_j> - delta_ij| on the grid
    double overlap_condition() const;  // condition number of the Gaussian-frame Gram matrix
    const std::vector<std::string>& warnings() const { return warnings_; }

    // a_f = <w_f|psi> for a complex 1D state sampled on the basis grid.
    std::vector<std::complex<double>> amplitudes(std::span<const std::complex<double>> psi) const;

private:
    WannierLatticeParams params_;
    Grid1D grid_;
    std::vector<double> re_, im_;
    double cond_ = 0.0;
    std::vector<std::string> warnings_;
};

// Tensor-product 2D basis. Flat cell order: j_x slowest, then j_y, then j_kx, then j_ky.
class WannierBasis2D {
public:
    static WannierBasis2D build(Wannier1D bx, Wannier1D by,
                                std::size_t max_cells = std::size_t(1) << 24);

    std::size_t size() const {
        return std::size_t(bx_.n_funcs()) * by_.n_funcs();
    }
    const Wannier1D& bx() const { return bx_; }
    const Wannier1D& by() const { return by_; }
    Grid2D grid() const { return Grid2D{bx_.grid(), by_.grid()}; }

    struct Cell {
        int jx, jy, jkx, jky;
    };
    std::size_t flat_index(const Cell& c) const;
    Cell cell(std::size_t flat) const;

    std::string config_key() const;

private:
    Wannier1D bx_, by_;
};

struct PhaseSpaceDistribution {
    // Probabilities in the flat cell order of the basis that produced the distribution,
    // renormalized to sum to one over the configured cells (conditioning on the captured
    // subspace; the raw captured norm is kept alongside).
    std::vector<double> p;
    double captured = 0.0;   // norm fraction inside the configured cell ranges
    bool truncated = false;  // captured < 0.99: cell ranges too tight for this state
    double entropy() const;
};

// -sum p ln p with 0 ln 0 = 0; rejects any p < -1e-12 as corrupted input.
double entropy(std::span<const double> p);

// Projection probabilities p_j = |<w_j|psi>|^2. The state must live on the basis grid
// and be L2-normalized on it within 1e-6.
PhaseSpaceDistribution project(const WannierBasis2D& basis, const GridField& state);

// Complex amplitudes <w_j|psi>, ordered [fx][fy] with fx = x-factor row, fy = y-factor
// row (the building block of project() and of the precomputed eigenstate overlaps).
std::vector<std::complex<double>> project_amplitudes(const WannierBasis2D& basis,
                                                     const GridField& state);

// 1D projection (used by the oscillator demo): p over (j_pos, j_mom), momentum fastest.
PhaseSpaceDistribution project_1d(const Wannier1D& basis,
                                  std::span<const std::complex<double>> psi);

}  // namespace bq
