#include "bq/square.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bq/kernels.hpp"

namespace bq {

SquareSpectrum SquareSpectrum::solve(double side, double x0, double y0, std::size_t n_eig,
                                     std::size_t cap) {
    if (!(side > 0.0)) throw std::invalid_argument("square: side must be positive");
    if (n_eig > cap) throw std::invalid_argument("square: n_eig exceeds configured cap");

    SquareSpectrum s;
    s.side_ = side;
    s.x0_ = x0;
    s.y0_ = y0;

    // Enumerate (p, q) lattice points until the ascending list is complete to n_eig.
    const double c = M_PI * M_PI / (side * side);
    int pmax = 2;
    while (std::size_t(pmax) * pmax < 4 * (n_eig + 1)) pmax *= 2;
    for (;;) {
        s.energies_.clear();
        s.modes_.clear();
        for (int p = 1; p <= pmax; ++p)
            for (int q = 1; q <= pmax; ++q) {
                s.energies_.push_back(c * (double(p) * p + double(q) * q));
                s.modes_.emplace_back(p, q);
            }
        std::vector<std::size_t> order(s.energies_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            if (s.energies_[i] != s.energies_[j]) return s.energies_[i] < s.energies_[j];
            return s.modes_[i] < s.modes_[j];
        });
        // The truncated enumeration is complete iff E_n_eig < E of a fresh corner mode.
        const double e_guard = c * (double(pmax) * pmax + 1.0);
        if (s.energies_[order[n_eig - 1]] < e_guard) {
            std::vector<double> e(n_eig);
            std::vector<std::pair<int, int>> m(n_eig);
            for (std::size_t i = 0; i < n_eig; ++i) {
                e[i] = s.energies_[order[i]];
                m[i] = s.modes_[order[i]];
            }
            s.energies_ = std::move(e);
            s.modes_ = std::move(m);
            break;
        }
        pmax *= 2;
    }

    // Native grid must keep all retained sine modes below its discrete-orthogonality limit.
    const int pm = int(std::sqrt(s.energies_.back() / c)) + 1;
    s.native_intervals_ = std::max(256, 4 * pm);
    return s;
}

Grid2D SquareSpectrum::native_grid() const {
    const int n = native_intervals_ + 1;
    return Grid2D{Grid1D{x0_, x0_ + side_, n}, Grid1D{y0_, y0_ + side_, n}};
}

void SquareSpectrum::eval_field(std::size_t n, const Grid2D& grid, double* out) const {
    const auto [p, q] = modes_[n];
    const double amp = 2.0 / side_;
    std::vector<double> sx(grid.gx.n), sy(grid.gy.n);
    for (int i = 0; i < grid.gx.n; ++i) {
        const double u = grid.gx.x(i) - x0_;
        sx[i] = (u <= 0.0 || u >= side_) ? 0.0 : std::sin(p * M_PI * u / side_);
    }
    for (int j = 0; j < grid.gy.n; ++j) {
        const double v = grid.gy.x(j) - y0_;
        sy[j] = (v <= 0.0 || v >= side_) ? 0.0 : std::sin(q * M_PI * v / side_);
    }
    for (int i = 0; i < grid.gx.n; ++i)
        for (int j = 0; j < grid.gy.n; ++j) out[grid.idx(i, j)] = amp * sx[i] * sy[j];
}

std::vector<std::complex<double>> SquareSpectrum::expand(const ComplexField2D& psi) const {
    const Grid2D g = native_grid();
    const int nx = g.gx.n, ny = g.gy.n;

    std::vector<std::complex<double>> vals(g.size());
    double norm2 = 0.0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            std::complex<double> v = psi(g.gx.x(i), g.gy.x(j));
            if (i == 0 || i == nx - 1 || j == 0 || j == ny - 1) v = 0.0;  // hard wall
            vals[g.idx(i, j)] = v;
            norm2 += g.gx.w(i) * g.gy.w(j) * std::norm(v);
        }
    if (!(norm2 > 0.0)) throw std::invalid_argument("square expand: state has zero norm");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : vals) v *= inv;

    int pm = 0;
    for (auto [p, q] : modes_) pm = std::max({pm, p, q});

    // Separable contraction: T[p][j] = sum_i w_i sin_p(i) psi(i, j).
    std::vector<double> sx(std::size_t(pm) * nx), sy(std::size_t(pm) * ny);
    for (int p = 1; p <= pm; ++p)
        for (int i = 0; i < nx; ++i)
            sx[std::size_t(p - 1) * nx + i] =
                g.gx.w(i) * std::sin(p * M_PI * (g.gx.x(i) - x0_) / side_);
    for (int q = 1; q <= pm; ++q)
        for (int j = 0; j < ny; ++j)
            sy[std::size_t(q - 1) * ny + j] =
                g.gy.w(j) * std::sin(q * M_PI * (g.gy.x(j) - y0_) / side_);

    std::vector<std::complex<double>> T(std::size_t(pm) * ny);
    for (int p = 0; p < pm; ++p)
        for (int j = 0; j < ny; ++j) {
            std::complex<double> acc = 0.0;
            for (int i = 0; i < nx; ++i) acc += sx[std::size_t(p) * nx + i] * vals[g.idx(i, j)];
            T[std::size_t(p) * ny + j] = acc;
        }

    const double amp = 2.0 / side_;
    std::vector<std::complex<double>> c(n_eig());
    for (std::size_t n = 0; n < n_eig(); ++n) {
        const auto [p, q] = modes_[n];
        std::complex<double> acc = 0.0;
        for (int j = 0; j < ny; ++j) acc += sy[std::size_t(q - 1) * ny + j] * T[std::size_t(p - 1) * ny + j];
        c[n] = amp * acc;  // <phi_n|psi>, phi real so no conjugation
    }
    return c;
}

GridSpectrum SquareSpectrum::sample(const Grid2D& grid, std::size_t count) const {
    if (count > n_eig()) throw std::invalid_argument("square sample: count exceeds n_eig");
    GridSpectrum out;
    out.grid = grid;
    out.b = side_ / 2.0;
    out.a = -1.0;
    out.energies.assign(energies_.begin(), energies_.begin() + count);
    out.fields.resize(count * grid.size());
    for (std::size_t n = 0; n < count; ++n) {
        double* f = out.fields.data() + n * grid.size();
        eval_field(n, grid, f);
        double norm2 = 0.0;
        for (int i = 0; i < grid.gx.n; ++i) {
            const double wx = grid.gx.w(i);
            for (int j = 0; j < grid.gy.n; ++j) {
                const double v = f[grid.idx(i, j)];
                norm2 += wx * grid.gy.w(j) * v * v;
            }
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t k = 0; k < grid.size(); ++k) f[k] *= inv;
    }
    return out;
}

}  // namespace bq
