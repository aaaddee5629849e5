#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bq/geometry.hpp"
#include "bq/spectral.hpp"
#include "bq/wannier.hpp"

namespace bq {

// Random-wave ensemble of Berry's conjecture: M plane waves of identical |k| on
// uniformly spaced directions, each with a zero-mean Gaussian amplitude and a uniform
// phase. The realization is the real part of the superposition (the matched symmetry
// class of a time-reversal-invariant billiard), masked to the interior and normalized.
struct BerryEnsembleSpec {
    double k = 1.0;
    int m_components = 128;
    std::uint64_t seed = 1;
};

// Deterministic sub-seed for per-level work: identical (seed, level) always yields the
// same stream regardless of evaluation order.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t level);

GridField sample_berry_state(const BerryEnsembleSpec& spec, const BilliardGeometry& geom,
                             const Grid2D& grid);

struct EntropySpectrumEntry {
    std::size_t level = 0;  // 1-based
    double energy = 0.0;
    double s_eig = 0.0, s_berry = 0.0;
    double cap_eig = 0.0, cap_berry = 0.0;
    bool truncated = false;  // either captured norm fell below 0.99
};

struct EntropySpectrum {
    std::vector<EntropySpectrumEntry> entries;
    std::vector<double> smoothed;         // 30-level microcanonical average of s_eig
    std::vector<std::uint8_t> edge_flag;  // truncated averaging window at the range edges
    std::vector<std::uint8_t> scar_flag;  // set by scar_fraction
    double scar_threshold = 0.0;
};

// Per-level eigenstate entropy and matched-k Berry entropy (k = sqrt(E_n), fresh
// sub-seed per level) over 1-based levels [lo, hi] of a sampled spectrum.
EntropySpectrum entropy_spectrum(const GridSpectrum& spec, const BilliardGeometry& geom,
                                 const WannierBasis2D& basis, std::size_t lo, std::size_t hi,
                                 const BerryEnsembleSpec& tmpl);

// Centered moving average over `window` nearest levels (window/2 below, the rest above);
// edge entries use the truncated neighborhood and are flagged.
std::vector<double> microcanonical_average(std::span<const double> s, int window = 30,
                                           std::vector<std::uint8_t>* edge_flag = nullptr);

// Mean absolute deviation of per-level entropy from its smoothed value (the Fig. 5(b)
// estimator); set rms to use the quadratic variant instead.
double entropy_fluctuation(const EntropySpectrum& spectrum, bool rms = false);

// Flags levels with s_eig < smoothed - threshold and returns the flagged fraction.
// The default threshold is calibrated so the a/b = 0.1 billiard lands near the paper's
// "about 10%" scar share.
inline constexpr double kScarThresholdDefault = 0.35;
double scar_fraction(EntropySpectrum& spectrum, double threshold = kScarThresholdDefault);

}  // namespace bq
