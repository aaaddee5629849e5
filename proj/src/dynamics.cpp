#include "bq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bq/kernels.hpp"

namespace bq {

ComplexField2D GaussianPacket::field() const {
    const double xc_ = xc, yc_ = yc, s4 = 4.0 * sigma * sigma, kx_ = kx, ky_ = ky;
    return [=](double x, double y) {
        const double dx = x - xc_, dy = y - yc_;
        const double env = std::exp(-(dx * dx + dy * dy) / s4);
        const double ph = kx_ * x + ky_ * y;
        return std::complex<double>(env * std::cos(ph), env * std::sin(ph));
    };
}

ExpansionCoefficients make_coefficients(std::vector<std::complex<double>> c, std::string source,
                                        bool force) {
    ExpansionCoefficients e;
    e.c = std::move(c);
    e.source = std::move(source);
    for (const auto& v : e.c) e.weight += std::norm(v);
    if (e.weight > 1.0 + 1e-9)
        throw std::invalid_argument("expansion weight exceeds 1: coefficients corrupted");
    e.flagged = e.weight < 0.999;
    if (e.flagged && !force)
        throw std::runtime_error("expansion captures " + std::to_string(e.weight) +
                                 " < 0.999 of the packet; enlarge n_eig or force");
    return e;
}

ExpansionCoefficients expand_on_grid(const GridSpectrum& spec, const GaussianPacket& packet,
                                     bool force) {
    const auto psi = packet.field();
    const auto& g = spec.grid;
    const double dA = g.cell_area();
    const double norm = std::sqrt(2.0 * M_PI) * packet.sigma;  // free-space Gaussian norm
    std::vector<std::complex<double>> vals(g.size());
    for (int ix = 0; ix < g.gx.n; ++ix)
        for (int iy = 0; iy < g.gy.n; ++iy)
            vals[g.idx(ix, iy)] = psi(g.gx.x(ix), g.gy.x(iy)) / norm;
    std::vector<std::complex<double>> c(spec.n_eig());
    double w = 0.0;
    for (std::size_t n = 0; n < spec.n_eig(); ++n) {
        const auto phi = spec.field(n);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) acc += phi[i] * vals[i];
        c[n] = acc * dA;
        w += std::norm(c[n]);
    }
    // grid quadrature can overshoot the unit weight by O(h^2); only larger excesses
    // indicate real corruption
    if (w > 1.0 && w < 1.0 + 1e-4)
        for (auto& v : c) v /= std::sqrt(w);
    return make_coefficients(std::move(c), "grid:" + std::to_string(spec.a), force);
}

char HybridDynamicsSpec::label() const {
    if (states == Source::integrable) return energies == Source::integrable ? 'a' : 'b';
    return energies == Source::integrable ? 'c' : 'd';
}

GridField evolve_state(const GridSpectrum& states, std::span<const double> energies,
                       const ExpansionCoefficients& coeffs, double t) {
    const std::size_t n = coeffs.c.size();
    if (states.n_eig() < n || energies.size() < n)
        throw std::invalid_argument("evolve_state: sources shorter than the coefficient vector");

    const std::size_t sz = states.grid.size();
    std::vector<double> fre(sz, 0.0), fim(sz, 0.0);
    const auto& k = kern::active();
    for (std::size_t m = 0; m < n; ++m) {
        const std::complex<double> d =
            coeffs.c[m] * std::complex<double>(std::cos(energies[m] * t), -std::sin(energies[m] * t));
        k.axpy_creal(fre.data(), fim.data(), states.field(m).data(), d.real(), d.imag(), sz);
    }
    GridField out;
    out.grid = states.grid;
    out.values.resize(sz);
    for (std::size_t i = 0; i < sz; ++i) out.values[i] = {fre[i], fim[i]};
    return out;
}

OverlapMatrix OverlapMatrix::build(const WannierBasis2D& basis, const GridSpectrum& spec) {
    const Grid2D bg = basis.grid();
    if (bg.gx.n != spec.grid.gx.n || bg.gy.n != spec.grid.gy.n ||
        std::abs(bg.gx.lo - spec.grid.gx.lo) > 1e-12 || std::abs(bg.gy.lo - spec.grid.gy.lo) > 1e-12)
        throw std::invalid_argument("overlap matrix: basis and spectrum grids differ");

    OverlapMatrix w;
    w.n_cells_ = basis.size();
    w.n_states_ = spec.n_eig();
    w.re_.assign(w.n_cells_ * w.n_states_, 0.0);
    w.im_.assign(w.n_cells_ * w.n_states_, 0.0);

    const auto& px = basis.bx().params();
    const auto& py = basis.by().params();
    const int nkx = px.n_mom(), nky = py.n_mom();
    const int nfy = basis.by().n_funcs();

    GridField f;
    f.grid = spec.grid;
    f.values.resize(spec.grid.size());
    for (std::size_t n = 0; n < w.n_states_; ++n) {
        const auto phi = spec.field(n);
        for (std::size_t i = 0; i < phi.size(); ++i) f.values[i] = phi[i];
        const auto amp = project_amplitudes(basis, f);
        for (int fx = 0; fx < basis.bx().n_funcs(); ++fx)
            for (int fy = 0; fy < nfy; ++fy) {
                const WannierBasis2D::Cell c{px.j_pos_lo + fx / nkx, py.j_pos_lo + fy / nky,
                                             px.j_mom_lo + fx % nkx, py.j_mom_lo + fy % nky};
                const std::size_t j = basis.flat_index(c);
                const auto a = amp[std::size_t(fx) * nfy + fy];
                w.re_[j * w.n_states_ + n] = a.real();
                w.im_[j * w.n_states_ + n] = a.imag();
            }
    }
    return w;
}

EntropyTimeSeries entropy_series(const OverlapMatrix& w, const ExpansionCoefficients& coeffs,
                                 std::span<const double> energies, std::span<const double> times,
                                 double characteristic_time) {
    const std::size_t n = coeffs.c.size();
    if (w.n_states() != n || energies.size() != n)
        throw std::invalid_argument("entropy series: state/energy source sizes differ");

    EntropyTimeSeries out;
    out.characteristic_time = characteristic_time;
    out.t.assign(times.begin(), times.end());
    out.s.resize(times.size());
    out.captured.resize(times.size());
    out.flag.resize(times.size());

    const auto& k = kern::active();
    std::vector<double> dre(n), dim(n), p(w.n_cells());
    for (std::size_t it = 0; it < times.size(); ++it) {
        const double t = times[it];
        for (std::size_t m = 0; m < n; ++m) {
            const double c = std::cos(energies[m] * t), s = std::sin(energies[m] * t);
            dre[m] = coeffs.c[m].real() * c + coeffs.c[m].imag() * s;
            dim[m] = coeffs.c[m].imag() * c - coeffs.c[m].real() * s;
        }
        double cap = 0.0;
        for (std::size_t j = 0; j < w.n_cells(); ++j) {
            p[j] = k.abs2_cdot(w.re(j).data(), w.im(j).data(), dre.data(), dim.data(), n);
            cap += p[j];
        }
        // same captured-renormalization convention as project()
        if (cap > 0.0)
            for (double& v : p) v /= cap;
        out.s[it] = entropy(p);
        out.captured[it] = cap;
        out.flag[it] = cap < 0.99;
    }
    return out;
}

double characteristic_time(double width_x, double kx) {
    if (width_x <= 0.0 || kx <= 0.0)
        throw std::invalid_argument("characteristic time needs positive width and kx");
    return 2.0 * width_x / (2.0 * kx);
}

std::vector<double> sample_times(double t_max, std::size_t n_samples) {
    if (t_max <= 0.0 || n_samples < 2) throw std::invalid_argument("bad sampling window");
    std::vector<double> t(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        t[i] = t_max * double(i) / double(n_samples - 1);
    return t;
}

PlateauStats fluctuation_metric(const EntropyTimeSeries& series, double t0, double t1) {
    PlateauStats st;
    std::size_t count = 0;
    for (std::size_t i = 0; i < series.t.size(); ++i)
        if (series.t[i] >= t0 && series.t[i] <= t1) {
            st.mean += series.s[i];
            ++count;
        }
    if (count == 0) throw std::invalid_argument("fluctuation metric: empty window");
    st.mean /= double(count);
    for (std::size_t i = 0; i < series.t.size(); ++i)
        if (series.t[i] >= t0 && series.t[i] <= t1) {
            const double d = series.s[i] - st.mean;
            st.stdev += d * d;
        }
    st.stdev = std::sqrt(st.stdev / double(count));
    return st;
}

RevivalResult revival_metric(const EntropyTimeSeries& series, double expected_period) {
    if (series.t.empty() || series.t.back() < expected_period)
        throw std::invalid_argument("revival metric: series ends before the first revival");
    const double T = series.characteristic_time;
    const auto plateau = fluctuation_metric(series, 5.0 * T, 20.0 * T);
    RevivalResult r;
    const double s0 = series.s.front();
    if (plateau.mean - s0 < 3.0 * plateau.stdev || plateau.mean - s0 < 1e-6) {
        r.plateau_defined = false;  // never equilibrated away from S(0)
        return r;
    }
    for (int mult = 1; mult * expected_period <= series.t.back() * 1.1; ++mult) {
        const double tc = mult * expected_period;
        const double lo = tc - 0.1 * expected_period, hi = tc + 0.1 * expected_period;
        for (std::size_t i = 0; i < series.t.size(); ++i) {
            if (series.t[i] < lo || series.t[i] > hi) continue;
            const double depth = (plateau.mean - series.s[i]) / (plateau.mean - s0);
            if (depth > r.depth) {
                r.depth = depth;
                r.at_time = series.t[i];
            }
        }
    }
    r.depth = std::clamp(r.depth, 0.0, 1.0);
    return r;
}

double recurrence_period(const EntropyTimeSeries& series, double rel_tol) {
    const std::size_t n = series.s.size();
    if (n < 8) return 0.0;
    const auto [mn, mx] = std::minmax_element(series.s.begin(), series.s.end());
    const double scale = 0.5 * (*mx - *mn);
    if (scale <= 0.0) return series.t[1] - series.t[0];

    std::vector<double> d(n / 2, 0.0);
    for (std::size_t m = 1; m < n / 2; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i + m < n; ++i) {
            const double df = series.s[i + m] - series.s[i];
            acc += df * df;
        }
        d[m] = std::sqrt(acc / double(n - m));
    }
    for (std::size_t m = 2; m + 1 < d.size(); ++m)
        if (d[m] < rel_tol * scale && d[m] <= d[m - 1] && d[m] <= d[m + 1])
            return series.t[m] - series.t[0];
    return 0.0;
}

}  // namespace bq
