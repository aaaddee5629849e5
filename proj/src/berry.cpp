#include "bq/berry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace bq {
namespace {

// Polar Box-Muller on the raw engine: the exact bit stream is part of the contract
// (std::normal_distribution is not portable across standard libraries).
class GaussianDraw {
public:
    explicit GaussianDraw(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double uniform() {  // [0, 1)
        return double(eng_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t level) {
    // splitmix64 finalizer over the combined words
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (level + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

GridField sample_berry_state(const BerryEnsembleSpec& spec, const BilliardGeometry& geom,
                             const Grid2D& grid) {
    if (spec.m_components < 16) throw std::invalid_argument("berry state needs M >= 16");
    if (spec.k <= 0.0) throw std::invalid_argument("berry state needs k > 0");

    GridField f;
    f.grid = grid;
    f.values.assign(grid.size(), 0.0);

    const int m = spec.m_components;
    std::vector<double> kx(m), ky(m), amp(m), phase(m);
    for (std::uint64_t attempt = 0;; ++attempt) {
        GaussianDraw rng(sub_seed(spec.seed, attempt));
        for (int j = 0; j < m; ++j) {
            const double th = 2.0 * M_PI * double(j) / double(m);
            kx[j] = spec.k * std::cos(th);
            ky[j] = spec.k * std::sin(th);
            amp[j] = rng();
            phase[j] = 2.0 * M_PI * rng.uniform();
        }
        for (int ix = 0; ix < grid.gx.n; ++ix) {
            const double x = grid.gx.x(ix);
            for (int iy = 0; iy < grid.gy.n; ++iy) {
                const double y = grid.gy.x(iy);
                if (!geom.inside(x, y)) continue;
                double v = 0.0;
                for (int j = 0; j < m; ++j)
                    v += amp[j] * std::cos(kx[j] * x + ky[j] * y + phase[j]);
                f.values[grid.idx(ix, iy)] = v;
            }
        }
        if (f.norm2() > 1e-12) break;  // else: degenerate draw, resample with next sub-seed
        if (attempt > 16) throw std::runtime_error("berry sampling degenerate for this seed");
    }
    f.normalize();
    return f;
}

EntropySpectrum entropy_spectrum(const GridSpectrum& spec, const BilliardGeometry& geom,
                                 const WannierBasis2D& basis, std::size_t lo, std::size_t hi,
                                 const BerryEnsembleSpec& tmpl) {
    if (lo < 1 || hi > spec.n_eig() || lo > hi)
        throw std::invalid_argument("entropy spectrum: level range outside the cache");

    EntropySpectrum out;
    GridField f;
    f.grid = spec.grid;
    f.values.resize(spec.grid.size());
    for (std::size_t n = lo; n <= hi; ++n) {
        EntropySpectrumEntry e;
        e.level = n;
        e.energy = spec.energies[n - 1];

        const auto phi = spec.field(n - 1);
        for (std::size_t i = 0; i < phi.size(); ++i) f.values[i] = phi[i];
        const auto de = project(basis, f);
        e.s_eig = de.entropy();
        e.cap_eig = de.captured;

        BerryEnsembleSpec bs = tmpl;
        bs.k = std::sqrt(e.energy);
        bs.seed = sub_seed(tmpl.seed, n);
        const auto db = project(basis, sample_berry_state(bs, geom, spec.grid));
        e.s_berry = db.entropy();
        e.cap_berry = db.captured;

        e.truncated = de.truncated || db.truncated;
        out.entries.push_back(e);
    }

    std::vector<double> s(out.entries.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = out.entries[i].s_eig;
    out.smoothed = microcanonical_average(s, 30, &out.edge_flag);
    out.scar_flag.assign(out.entries.size(), 0);
    return out;
}

std::vector<double> microcanonical_average(std::span<const double> s, int window,
                                           std::vector<std::uint8_t>* edge_flag) {
    if (window < 1 || std::size_t(window) > s.size())
        throw std::invalid_argument("microcanonical average: bad window");
    std::vector<double> out(s.size());
    if (edge_flag) edge_flag->assign(s.size(), 0);
    const int below = window / 2;  // centered rule: window/2 below, window-1-window/2 above
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::ptrdiff_t lo = std::ptrdiff_t(i) - below;
        const std::ptrdiff_t hi = lo + window - 1;
        const std::size_t a = lo < 0 ? 0 : std::size_t(lo);
        const std::size_t b = hi >= std::ptrdiff_t(s.size()) ? s.size() - 1 : std::size_t(hi);
        double acc = 0.0;
        for (std::size_t j = a; j <= b; ++j) acc += s[j];
        out[i] = acc / double(b - a + 1);
        if (edge_flag && (lo < 0 || hi >= std::ptrdiff_t(s.size()))) (*edge_flag)[i] = 1;
    }
    return out;
}

double entropy_fluctuation(const EntropySpectrum& spectrum, bool rms) {
    if (spectrum.entries.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
        const double d = spectrum.entries[i].s_eig - spectrum.smoothed[i];
        acc += rms ? d * d : std::abs(d);
    }
    acc /= double(spectrum.entries.size());
    return rms ? std::sqrt(acc) : acc;
}

double scar_fraction(EntropySpectrum& spectrum, double threshold) {
    spectrum.scar_threshold = threshold;
    spectrum.scar_flag.assign(spectrum.entries.size(), 0);
    std::size_t count = 0;
    for (std::size_t i = 0; i < spectrum.entries.size(); ++i)
        if (spectrum.entries[i].s_eig < spectrum.smoothed[i] - threshold) {
            spectrum.scar_flag[i] = 1;
            ++count;
        }
    return spectrum.entries.empty() ? 0.0 : double(count) / double(spectrum.entries.size());
}

}  // namespace bq
