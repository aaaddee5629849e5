#include "bq/spectral.hpp"

#include <cmath>
#include <sstream>

#include "bq/kernels.hpp"

namespace bq {

double GridField::norm2() const {
    double s = 0.0;
    for (int i = 0; i < grid.gx.n; ++i) {
        const double wx = grid.gx.w(i);
        for (int j = 0; j < grid.gy.n; ++j)
            s += wx * grid.gy.w(j) * std::norm(values[grid.idx(i, j)]);
    }
    return s;
}

void GridField::normalize() {
    const double n2 = norm2();
    if (!(n2 > 0.0)) throw std::invalid_argument("normalize: zero-norm field");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& v : values) v *= inv;
}

double weyl_estimate(double area, double perimeter, double energy) {
    return (area * energy - perimeter * std::sqrt(energy)) / (4.0 * M_PI);
}

std::size_t level_count(const std::vector<double>& energies, double energy) {
    return std::upper_bound(energies.begin(), energies.end(), energy) - energies.begin();
}

namespace {

double grid_dot(const GridSpectrum& s, std::size_t m, std::size_t n,
                const std::vector<double>& w) {
    return kern::active().dot3(s.field(m).data(), s.field(n).data(), w.data(), w.size());
}

}  // namespace

ValidationReport verify_spectrum(const GridSpectrum& spec, const BilliardGeometry& geom,
                                 std::size_t ortho_pairs, double e_lo, double e_hi) {
    ValidationReport rep;
    const Grid2D& g = spec.grid;
    const std::size_t ne = spec.n_eig();

    std::vector<double> w(g.size()), w_out(g.size());
    for (int i = 0; i < g.gx.n; ++i)
        for (int j = 0; j < g.gy.n; ++j) {
            const std::size_t k = g.idx(i, j);
            w[k] = g.gx.w(i) * g.gy.w(j);
            w_out[k] = geom.inside_node(i, j) ? 0.0 : w[k];
        }

    for (std::size_t n = 0; n < ne; ++n) {
        const double nr = std::abs(grid_dot(spec, n, n, w) - 1.0);
        const double leak = grid_dot(spec, n, n, w_out);
        rep.max_norm_residual = std::max(rep.max_norm_residual, nr);
        rep.max_boundary_leak = std::max(rep.max_boundary_leak, leak);
        if (nr > 1e-6 || leak > 1e-3) {
            rep.flagged.push_back(n);
            rep.ok = false;
        }
    }

    // Orthogonality probe: all pairs when affordable, otherwise a deterministic stride
    // over the strictly-upper triangle.
    const std::size_t total = ne * (ne - 1) / 2;
    const std::size_t probes = (ortho_pairs == 0 || ortho_pairs >= total) ? total : ortho_pairs;
    if (total > 0) {
        const std::size_t stride = std::max<std::size_t>(1, total / probes);
        for (std::size_t flat = 0; flat < total; flat += stride) {
            // flat -> (m, n), m < n
            std::size_t m = 0, rem = flat;
            while (rem >= ne - 1 - m) {
                rem -= ne - 1 - m;
                ++m;
            }
            const std::size_t n = m + 1 + rem;
            rep.max_ortho_residual =
                std::max(rep.max_ortho_residual, std::abs(grid_dot(spec, m, n, w)));
        }
    }

    if (spec.a >= 0.0 && !spec.energies.empty() && spec.energies.back() >= e_lo) {
        const double area = geom.area();
        const double per = geom.perimeter();
        const double hi = std::min(e_hi, spec.energies.back());
        for (int k = 0; k <= 40; ++k) {
            const double e = e_lo + (hi - e_lo) * k / 40.0;
            const double west = weyl_estimate(area, per, e);
            if (west <= 0.0) continue;
            const double dev = (double(level_count(spec.energies, e)) - west) / west;
            rep.weyl_curve.emplace_back(e, dev);
            rep.weyl_max_rel_dev = std::max(rep.weyl_max_rel_dev, std::abs(dev));
        }
    }
    return rep;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << "norm_residual=" << max_norm_residual << " ortho_residual=" << max_ortho_residual
       << " boundary_leak=" << max_boundary_leak << " weyl_dev=" << weyl_max_rel_dev
       << " flagged=" << flagged.size() << (ok ? " OK" : " FAIL");
    return os.str();
}

}  // namespace bq
