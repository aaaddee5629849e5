#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "bq/berry.hpp"
#include "bq/defaults.hpp"
#include "bq/geometry.hpp"
#include "bq/wannier.hpp"
#include "doctest.h"

namespace {

const bq::BilliardGeometry& geom() {
    static auto g = bq::BilliardGeometry::build(bq::defaults::kB, bq::defaults::kA,
                                                bq::defaults::kGridN, bq::defaults::kGridN);
    return g;
}

// true when the whole square of half-width `pad` around (x, y) is inside the domain
bool deep_inside(const bq::BilliardGeometry& g, double x, double y, double pad) {
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            if (!g.inside(x + pad * dx, y + pad * dy)) return false;
    return true;
}

std::vector<double> interior_samples(const bq::GridField& f, const bq::BilliardGeometry& g,
                                     double pad) {
    std::vector<double> v;
    const auto& grid = f.grid;
    for (int ix = 0; ix < grid.gx.n; ++ix)
        for (int iy = 0; iy < grid.gy.n; ++iy)
            if (deep_inside(g, grid.gx.x(ix), grid.gy.x(iy), pad))
                v.push_back(f.values[grid.idx(ix, iy)].real());
    return v;
}

// Kolmogorov-Smirnov distance to a fitted zero-mean normal.
double ks_to_normal(std::vector<double> v) {
    double s2 = 0.0;
    for (double x : v) s2 += x * x;
    const double sd = std::sqrt(s2 / double(v.size()));
    std::sort(v.begin(), v.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double cdf = 0.5 * std::erfc(-v[i] / (sd * std::sqrt(2.0)));
        ks = std::max(ks, std::abs(cdf - (i + 0.5) / double(v.size())));
    }
    return ks;
}

}  // namespace

TEST_CASE("sub-seeds are deterministic and collision-free over a level range") {
    CHECK(bq::sub_seed(1, 857) == bq::sub_seed(1, 857));
    std::vector<std::uint64_t> seen;
    for (std::uint64_t lvl = 0; lvl < 2000; ++lvl) seen.push_back(bq::sub_seed(7, lvl));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    CHECK(bq::sub_seed(1, 5) != bq::sub_seed(2, 5));
}

TEST_CASE("realizations are deterministic in the seed and unit-normalized") {
    bq::BerryEnsembleSpec spec{9.6, 128, 42};
    auto f1 = bq::sample_berry_state(spec, geom(), bq::defaults::phase_grid());
    auto f2 = bq::sample_berry_state(spec, geom(), bq::defaults::phase_grid());
    REQUIRE(f1.values.size() == f2.values.size());
    for (std::size_t i = 0; i < f1.values.size(); ++i) CHECK(f1.values[i] == f2.values[i]);
    CHECK(f1.norm2() == doctest::Approx(1.0).epsilon(1e-10));

    spec.seed = 43;
    auto f3 = bq::sample_berry_state(spec, geom(), bq::defaults::phase_grid());
    double diff = 0.0;
    for (std::size_t i = 0; i < f1.values.size(); ++i)
        diff = std::max(diff, std::abs(f1.values[i] - f3.values[i]));
    CHECK(diff > 1e-3);
}

TEST_CASE("field values are Gaussian-distributed in the deep interior") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        bq::BerryEnsembleSpec spec{9.6, 128, seed};
        auto f = bq::sample_berry_state(spec, geom(), bq::defaults::phase_grid());
        auto v = interior_samples(f, geom(), 0.45);
        REQUIRE(v.size() > 5000);
        CHECK(ks_to_normal(std::move(v)) < 0.05);
    }
}

TEST_CASE("superposition is band-limited: -laplacian psi = k^2 psi in the interior") {
    bq::BerryEnsembleSpec spec{7.0, 128, 3};
    const bq::Grid2D grid = bq::defaults::phase_grid();
    auto f = bq::sample_berry_state(spec, geom(), grid);
    const double hx = grid.gx.dx(), hy = grid.gy.dx();
    double num = 0.0, den = 0.0;
    for (int ix = 1; ix < grid.gx.n - 1; ++ix)
        for (int iy = 1; iy < grid.gy.n - 1; ++iy) {
            if (!deep_inside(geom(), grid.gx.x(ix), grid.gy.x(iy), 0.3)) continue;
            const auto at = [&](int jx, int jy) { return f.values[grid.idx(jx, jy)].real(); };
            const double lap = (at(ix + 1, iy) - 2.0 * at(ix, iy) + at(ix - 1, iy)) / (hx * hx) +
                               (at(ix, iy + 1) - 2.0 * at(ix, iy) + at(ix, iy - 1)) / (hy * hy);
            num += std::pow(lap + spec.k * spec.k * at(ix, iy), 2.0);
            den += std::pow(spec.k * spec.k * at(ix, iy), 2.0);
        }
    CHECK(std::sqrt(num / den) < 0.05);  // finite-difference error at this k and h
}

TEST_CASE("momentum distribution is an isotropic ring of radius k / k0") {
    auto basis = bq::defaults::basis();
    const double k = 3.0 * bq::kTwoPi;  // ring radius 3 cells
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        bq::BerryEnsembleSpec spec{k, 128, seed};
        auto f = bq::sample_berry_state(spec, geom(), basis.grid());
        auto d = bq::project(basis, f);
        double ring = 0.0;
        for (std::size_t j = 0; j < d.p.size(); ++j) {
            const auto c = basis.cell(j);
            if (std::abs(std::hypot(double(c.jkx), double(c.jky)) - 3.0) <= 1.0) ring += d.p[j];
        }
        CHECK(ring >= 0.70);
    }
}

TEST_CASE("microcanonical average: constants, ramps, edge flags") {
    std::vector<double> c(100, 3.25);
    std::vector<std::uint8_t> edge;
    auto sm = bq::microcanonical_average(c, 30, &edge);
    REQUIRE(sm.size() == 100);
    for (double v : sm) CHECK(v == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(edge[0] == 1);
    CHECK(edge[99] == 1);
    CHECK(edge[50] == 0);

    std::vector<double> ramp(100);
    for (int i = 0; i < 100; ++i) ramp[i] = 0.1 * i;
    sm = bq::microcanonical_average(ramp, 30, &edge);
    // centered even window (15 below, 14 above) sits half a step below the ramp
    for (int i = 20; i < 80; ++i)
        if (!edge[i]) CHECK(sm[i] == doctest::Approx(ramp[i] - 0.05).epsilon(1e-10));
}

TEST_CASE("fluctuation and scar fraction on a synthetic spectrum") {
    bq::EntropySpectrum es;
    for (int i = 0; i < 200; ++i) {
        bq::EntropySpectrumEntry e;
        e.level = std::size_t(i + 1);
        e.energy = double(i + 1);
        e.s_eig = 7.0 + ((i % 2 == 0) ? 0.05 : -0.05);
        if (i == 120) e.s_eig = 5.0;  // one scar
        e.s_berry = 7.0;
        es.entries.push_back(e);
    }
    std::vector<double> s;
    for (const auto& e : es.entries) s.push_back(e.s_eig);
    es.smoothed = bq::microcanonical_average(s, 30, &es.edge_flag);

    const double frac = bq::scar_fraction(es, 0.35);
    CHECK(frac == doctest::Approx(1.0 / 200.0));
    CHECK(es.scar_flag[120] == 1);
    CHECK(es.scar_flag[121] == 0);
    CHECK(es.scar_threshold == 0.35);

    const double fl = bq::entropy_fluctuation(es);
    CHECK(fl > 0.04);
    CHECK(fl < 0.08);
    CHECK(bq::entropy_fluctuation(es, true) >= fl);
}
