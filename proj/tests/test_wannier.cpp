#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "bq/defaults.hpp"
#include "bq/wannier.hpp"
#include "doctest.h"

namespace {

using cplx = std::complex<double>;

std::vector<cplx> grid_normalized(const bq::Grid1D& g, std::vector<cplx> v) {
    double n2 = 0.0;
    for (int i = 0; i < g.n; ++i) n2 += g.w(i) * std::norm(v[i]);
    const double s = 1.0 / std::sqrt(n2);
    for (auto& x : v) x *= s;
    return v;
}

std::vector<cplx> gaussian_1d(const bq::Grid1D& g, double center, double zeta, double k) {
    std::vector<cplx> v(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        const double d = x - center;
        v[i] = std::exp(-d * d / (4.0 * zeta * zeta)) * std::exp(cplx(0.0, k * x));
    }
    return grid_normalized(g, v);
}

}  // namespace

TEST_CASE("well-separated Gaussians are already orthonormal") {
    // single momentum row with x0 >> zeta: Loewdin is a no-op and each Gaussian owns
    // its cell (with both index ranges populated, x0 k0 = 2 pi forbids separation)
    bq::WannierLatticeParams lat{10.0, bq::kTwoPi / 10.0, 0.3, 0.0, -2, 2, 0, 0};
    const bq::Grid1D grid{-25.0, 25.0, 1200};
    auto basis = bq::Wannier1D::build(lat, grid);
    CHECK(basis.overlap_condition() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(basis.gram_residual() < 1e-10);

    auto psi = gaussian_1d(grid, 10.0, 0.3, 0.0);  // cell (j_pos=1, j_mom=0)
    auto d = bq::project_1d(basis, psi);
    CHECK(d.p[std::size_t(basis.index(1, 0))] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d.entropy() == doctest::Approx(0.0).epsilon(1e-4));
}

TEST_CASE("reference lattice: Gram residual, size, uniform entropy") {
    auto bx = bq::Wannier1D::build(bq::defaults::lattice_x(bq::defaults::kZeta),
                                   bq::defaults::phase_grid().gx);
    auto by = bq::Wannier1D::build(bq::defaults::lattice_y(bq::defaults::kZeta),
                                   bq::defaults::phase_grid().gy);
    CHECK(bx.n_funcs() == 117);
    CHECK(by.n_funcs() == 99);
    CHECK(bx.gram_residual() < 1e-10);
    CHECK(by.gram_residual() < 1e-10);

    auto basis = bq::WannierBasis2D::build(bx, by);
    REQUIRE(basis.size() == 11583);
    std::vector<double> uniform(basis.size(), 1.0 / double(basis.size()));
    CHECK(bq::entropy(uniform) == doctest::Approx(std::log(11583.0)).epsilon(1e-13));
    CHECK(std::log(11583.0) == doctest::Approx(9.357).epsilon(1e-4));
}

TEST_CASE("a single basis function projects to a point distribution") {
    bq::WannierLatticeParams lat{1.0, bq::kTwoPi, bq::defaults::kZeta, 0.0, -3, 3, -2, 2};
    const bq::Grid1D grid{-5.5, 5.5, 400};
    auto basis = bq::Wannier1D::build(lat, grid);
    const int f = basis.index(1, -1);
    std::vector<cplx> psi(grid.n);
    for (int i = 0; i < grid.n; ++i) psi[i] = cplx(basis.re(f)[i], basis.im(f)[i]);
    auto d = bq::project_1d(basis, psi);
    CHECK(d.captured == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.p[std::size_t(f)] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(d.entropy() == doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("translation by one lattice constant shifts the distribution by one cell") {
    bq::WannierLatticeParams lat{1.0, bq::kTwoPi, bq::defaults::kZeta, 0.0, -4, 4, -3, 3};
    const bq::Grid1D grid{-8.0, 8.0, 900};
    auto basis = bq::Wannier1D::build(lat, grid);

    auto d0 = bq::project_1d(basis, gaussian_1d(grid, -0.3, 0.35, 2.0));
    auto d1 = bq::project_1d(basis, gaussian_1d(grid, -0.3 + lat.x0, 0.35, 2.0));
    // Loewdin functions of a finite frame are translation-covariant only in the bulk;
    // near-edge cells deviate at the 1e-7 level, hence the absolute tolerance
    for (int jp = lat.j_pos_lo; jp + 1 <= lat.j_pos_hi; ++jp)
        for (int jm = lat.j_mom_lo; jm <= lat.j_mom_hi; ++jm) {
            const double a = d0.p[std::size_t(basis.index(jp, jm))];
            const double b = d1.p[std::size_t(basis.index(jp + 1, jm))];
            CHECK(std::abs(a - b) < 5e-6);
            if (a > 1e-3) CHECK(b == doctest::Approx(a).epsilon(1e-5));
        }
}

TEST_CASE("separable states factorize the 2D distribution") {
    auto bx = bq::Wannier1D::build(bq::defaults::lattice_x(bq::defaults::kZeta),
                                   bq::defaults::phase_grid().gx);
    auto by = bq::Wannier1D::build(bq::defaults::lattice_y(bq::defaults::kZeta),
                                   bq::defaults::phase_grid().gy);
    auto basis = bq::WannierBasis2D::build(bx, by);
    const auto g = basis.grid();

    auto fx = gaussian_1d(g.gx, 0.7, 0.8, 3.0);
    auto fy = gaussian_1d(g.gy, 5.2, 0.8, -2.0);
    bq::GridField psi;
    psi.grid = g;
    psi.values.resize(g.size());
    for (int ix = 0; ix < g.gx.n; ++ix)
        for (int iy = 0; iy < g.gy.n; ++iy) psi.values[g.idx(ix, iy)] = fx[ix] * fy[iy];
    psi.normalize();

    auto d2 = bq::project(basis, psi);
    auto dx = bq::project_1d(bx, fx);
    auto dy = bq::project_1d(by, fy);
    CHECK(d2.captured == doctest::Approx(dx.captured * dy.captured).epsilon(1e-6));

    const auto& px = bx.params();
    const auto& py = by.params();
    for (int jx = px.j_pos_lo; jx <= px.j_pos_hi; jx += 2)
        for (int jy = py.j_pos_lo; jy <= py.j_pos_hi; jy += 2)
            for (int jkx = px.j_mom_lo; jkx <= px.j_mom_hi; ++jkx)
                for (int jky = py.j_mom_lo; jky <= py.j_mom_hi; ++jky) {
                    const double expect = dx.p[std::size_t(bx.index(jx, jkx))] *
                                          dy.p[std::size_t(by.index(jy, jky))];
                    CHECK(d2.p[basis.flat_index({jx, jy, jkx, jky})] ==
                          doctest::Approx(expect).epsilon(1e-6));
                }
}

TEST_CASE("entropy: pure-function properties and mixing concavity") {
    CHECK(bq::entropy(std::vector<double>{1.0}) == 0.0);
    CHECK(bq::entropy(std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(bq::entropy(std::vector<double>{1.0, 0.0, 0.0}) == 0.0);
    CHECK_THROWS(bq::entropy(std::vector<double>{1.1, -0.1}));

    std::vector<double> p{0.7, 0.2, 0.1}, q{0.1, 0.3, 0.6}, m(3);
    for (int i = 0; i < 3; ++i) m[i] = 0.5 * (p[i] + q[i]);
    CHECK(bq::entropy(m) >= 0.5 * (bq::entropy(p) + bq::entropy(q)));
}

TEST_CASE("projection rejects unnormalized states") {
    auto bx = bq::Wannier1D::build(bq::defaults::lattice_x(bq::defaults::kZeta),
                                   bq::defaults::phase_grid().gx);
    auto by = bq::Wannier1D::build(bq::defaults::lattice_y(bq::defaults::kZeta),
                                   bq::defaults::phase_grid().gy);
    auto basis = bq::WannierBasis2D::build(bx, by);
    bq::GridField psi;
    psi.grid = basis.grid();
    psi.values.assign(psi.grid.size(), cplx(1.0, 0.0));
    CHECK_THROWS(bq::project(basis, psi));
}

TEST_CASE("lattice parameters are validated") {
    bq::WannierLatticeParams bad = bq::defaults::lattice_x(bq::defaults::kZeta);
    bad.k0 = 6.0;  // x0 * k0 != 2 pi
    CHECK_THROWS(bad.validate());
}
