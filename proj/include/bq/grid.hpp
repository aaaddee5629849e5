#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bq {

// Uniform 1D grid with n nodes, endpoints included.
struct Grid1D {
    double lo = 0.0;
    double hi = 1.0;
    int n = 2;

    double dx() const { return (hi - lo) / (n - 1); }
    double x(int i) const { return lo + i * dx(); }
    double span() const { return hi - lo; }

    // Trapezoid quadrature weight of node i.
    double w(int i) const {
        const double h = dx();
        return (i == 0 || i == n - 1) ? 0.5 * h : h;
    }

    std::vector<double> nodes() const {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = x(i);
        return v;
    }
    std::vector<double> weights() const {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = w(i);
        return v;
    }

    bool operator==(const Grid1D&) const = default;
};

// Tensor grid; fields are stored row-major with y fastest: idx = ix * gy.n + iy.
struct Grid2D {
    Grid1D gx;
    Grid1D gy;

    std::size_t size() const { return std::size_t(gx.n) * gy.n; }
    std::size_t idx(int ix, int iy) const { return std::size_t(ix) * gy.n + iy; }
    double cell_area() const { return gx.dx() * gy.dx(); }

    bool operator==(const Grid2D&) const = default;
};

// Non-uniform 1D quadrature rule (nodes + weights).
struct QuadRule1D {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// Composite Gauss-Legendre rule: `panels` equal panels of `order` points over [lo, hi].
QuadRule1D gauss_legendre_composite(double lo, double hi, int panels, int order);

}  // namespace bq
