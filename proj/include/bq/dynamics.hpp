#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bq/spectral.hpp"
#include "bq/wannier.hpp"

namespace bq {

// Moving Gaussian wave packet exp[-((x-xc)^2+(y-yc)^2)/(4 sigma^2) + i(kx x + ky y)],
// normalized after masking to the billiard interior.
struct GaussianPacket {
    double xc = 0.0, yc = 5.5;
    double sigma = 1.0;
    double kx = 6.05, ky = 0.0;

    ComplexField2D field() const;
};

struct ExpansionCoefficients {
    std::vector<std::complex<double>> c;  // <phi_n|Psi(0)>, n ascending by energy
    std::string source;                   // spectrum identifier
    double weight = 0.0;                  // sum |c_n|^2
    bool flagged = false;                 // weight < 0.999: truncated expansion
};

// Wraps raw expansion coefficients (from SquareSpectrum::expand or RippleSpectrum::expand)
// with the captured-weight bookkeeping. Throws if weight < 0.999 unless force is set.
ExpansionCoefficients make_coefficients(std::vector<std::complex<double>> c, std::string source,
                                        bool force = false);

// Packet expansion over an already-sampled spectrum via grid quadrature. The sampled
// fields vanish outside the billiard, so the mask is implicit; the packet is normalized
// by its free-space norm before projecting.
ExpansionCoefficients expand_on_grid(const GridSpectrum& spec, const GaussianPacket& packet,
                                     bool force = false);

// The four hybrid dynamics: eigenstates from one source, eigen-energies from the other,
// paired index-by-ascending-energy.
enum class Source { integrable, chaotic };
struct HybridDynamicsSpec {
    Source states = Source::integrable;
    Source energies = Source::integrable;

    // Fig. 3 panel labels: (a) ii, (b) ic, (c) ci, (d) cc.
    char label() const;
};

// Psi(t) = sum_n c_n exp(-i E_n t) phi_n on the grid of `states`. Energies may come
// from a different spectrum; sizes must match the coefficient count.
GridField evolve_state(const GridSpectrum& states, std::span<const double> energies,
                       const ExpansionCoefficients& coeffs, double t);

// Precomputed overlaps W_jn = <w_j|phi_n> between a Wannier basis and a sampled
// spectrum, stored split (re, im) row-major [cell][state]. This is the workhorse of
// the entropy time series: p_j(t) = |sum_n W_jn c_n e^{-i E_n t}|^2.
class OverlapMatrix {
public:
    static OverlapMatrix build(const WannierBasis2D& basis, const GridSpectrum& spec);

    std::size_t n_cells() const { return n_cells_; }
    std::size_t n_states() const { return n_states_; }
    std::span<const double> re(std::size_t cell) const {
        return {re_.data() + cell * n_states_, n_states_};
    }
    std::span<const double> im(std::size_t cell) const {
        return {im_.data() + cell * n_states_, n_states_};
    }

private:
    std::size_t n_cells_ = 0, n_states_ = 0;
    std::vector<double> re_, im_;
};

struct EntropyTimeSeries {
    std::vector<double> t;         // in units 2mL^2/hbar
    std::vector<double> s;         // S_w(t), from captured-renormalized probabilities
    std::vector<double> captured;  // captured norm per sample
    std::vector<std::uint8_t> flag;  // captured < 0.99 at this sample
    double characteristic_time = 0.0;
};

// S_w over `times` for one hybrid: phases from `energies`, cells from the precomputed
// overlaps of the eigenstate source. Never re-projects grids per time step.
EntropyTimeSeries entropy_series(const OverlapMatrix& w, const ExpansionCoefficients& coeffs,
                                 std::span<const double> energies, std::span<const double> times,
                                 double characteristic_time);

// Characteristic time T: round trip of the packet center across the x-width at group
// speed 2 kx (square side 5.5, kx 5.5 -> 1; ripple width 11, kx 6.05 -> 1.818...).
double characteristic_time(double width_x, double kx);

// Uniform sample times, default 400 over [0, 20 T].
std::vector<double> sample_times(double t_max, std::size_t n_samples = 400);

struct PlateauStats {
    double mean = 0.0;
    double stdev = 0.0;
};

// Mean and standard deviation of S_w over samples with t in [t0, t1].
PlateauStats fluctuation_metric(const EntropyTimeSeries& series, double t0, double t1);

struct RevivalResult {
    double depth = 0.0;       // (plateau mean - revival minimum) / (plateau mean - S_w(0))
    double at_time = 0.0;     // location of the deepest revival minimum
    bool plateau_defined = true;  // false: no equilibration detected, depth meaningless
};

// Deepest entropy revival in +-10% windows around multiples of expected_period, measured
// against the plateau over [5T, 20T] and clamped to [0, 1].
RevivalResult revival_metric(const EntropyTimeSeries& series, double expected_period);

// Smallest time shift after which the series repeats: first local minimum of the RMS
// self-difference that drops below `rel_tol` times the series' half-range. Returns 0
// if the series never recurs that closely.
double recurrence_period(const EntropyTimeSeries& series, double rel_tol = 0.2);

}  // namespace bq
