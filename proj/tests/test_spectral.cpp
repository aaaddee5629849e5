#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <set>

#include "bq/geometry.hpp"
#include "bq/ripple.hpp"
#include "bq/spectral.hpp"
#include "bq/square.hpp"
#include "doctest.h"

namespace {
bq::RippleSpectrum small_solve(double a, std::size_t n_eig = 60, bool certify = false) {
    auto geom = bq::BilliardGeometry::build(5.5, a, 96, 96);
    bq::RippleSpectrum::Options opt;
    opt.n_eig = n_eig;
    opt.cap = n_eig;
    opt.certify = certify;
    return bq::RippleSpectrum::solve(geom, opt);
}
}  // namespace

TEST_CASE("square spectrum is the analytic Dirichlet ladder") {
    const double side = 11.0;
    auto sq = bq::SquareSpectrum::solve(side, -5.5, 0.0, 50);
    std::multiset<double> expect;
    for (int p = 1; p <= 40; ++p)
        for (int q = 1; q <= 40; ++q)
            expect.insert(M_PI * M_PI * (p * p + q * q) / (side * side));
    auto it = expect.begin();
    for (std::size_t n = 0; n < 50; ++n, ++it) {
        CHECK(sq.energy(n) == doctest::Approx(*it).epsilon(1e-14));
        const auto [p, q] = sq.mode(n);
        CHECK(sq.energy(n) ==
              doctest::Approx(M_PI * M_PI * (p * p + q * q) / (side * side)).epsilon(1e-14));
    }
}

TEST_CASE("square fields are orthonormal under the aligned-grid trapezoid rule") {
    auto sq = bq::SquareSpectrum::solve(5.5, -2.75, 2.75, 12);
    auto spec = sq.sample(sq.native_grid(), 12);
    for (std::size_t n = 0; n < 12; ++n) {
        double nn = 0.0, cross = 0.0;
        const auto fn = spec.field(n), f0 = spec.field(0);
        for (std::size_t i = 0; i < fn.size(); ++i) {
            nn += fn[i] * fn[i];
            if (n > 0) cross += fn[i] * f0[i];
        }
        nn *= spec.grid.cell_area();
        cross *= spec.grid.cell_area();
        CHECK(nn == doctest::Approx(1.0).epsilon(1e-10));
        if (n > 0) CHECK(std::abs(cross) < 1e-10);
    }
}

TEST_CASE("ripple solver at a = 0 reproduces the square within 0.5%") {
    auto rip = small_solve(0.0, 50);
    auto sq = bq::SquareSpectrum::solve(11.0, -5.5, 0.0, 50);
    for (std::size_t n = 0; n < 50; ++n)
        CHECK(std::abs(rip.energy(n) - sq.energy(n)) / sq.energy(n) < 5e-3);
}

TEST_CASE("ripple energies are ascending, positive, and deterministic") {
    auto s1 = small_solve(0.55);
    auto s2 = small_solve(0.55);
    CHECK(s1.energy(0) > 0.0);
    for (std::size_t n = 1; n < s1.n_eig(); ++n) CHECK(s1.energy(n) >= s1.energy(n - 1));
    for (std::size_t n = 0; n < s1.n_eig(); ++n) CHECK(s1.energy(n) == s2.energy(n));
}

TEST_CASE("spectrum is continuous in the ripple amplitude") {
    auto s0 = small_solve(0.0);
    auto s1 = small_solve(1e-6);
    for (std::size_t n = 0; n < 40; ++n)
        CHECK(std::abs(s1.energy(n) - s0.energy(n)) / s0.energy(n) < 1e-4);
}

TEST_CASE("solver-native Gram residuals are tiny") {
    auto s = small_solve(0.55, 40);
    const auto [diag, off] = s.gram_residuals(40);
    CHECK(diag < 1e-10);
    CHECK(off < 1e-10);
}

TEST_CASE("refinement certificate passes on a modest problem") {
    auto s = small_solve(0.55, 40, true);
    REQUIRE(s.certificate().has_value());
    CHECK(s.certificate()->passed);
    CHECK(s.certificate()->rel_shift < 1e-3);
}

TEST_CASE("sampled spectrum passes the audit") {
    auto geom = bq::BilliardGeometry::build(5.5, 0.55, 180, 180);
    auto spec = small_solve(0.55, 60).sample(geom.grid(), 60);
    auto report = bq::verify_spectrum(spec, geom, 500, 3.0, 10.0);
    INFO(report.summary());
    CHECK(report.ok);
    CHECK(report.max_norm_residual < 1e-8);
    CHECK(report.max_boundary_leak < 1e-10);
}

TEST_CASE("two-term Weyl estimate and level counting") {
    // N(E) = (A E - P sqrt(E)) / (4 pi)
    CHECK(bq::weyl_estimate(121.0, 44.0, 100.0) ==
          doctest::Approx((121.0 * 100.0 - 44.0 * 10.0) / (4.0 * M_PI)));
    std::vector<double> e{1.0, 2.0, 2.0, 3.0};
    CHECK(bq::level_count(e, 2.0) == 3);
    CHECK(bq::level_count(e, 0.5) == 0);
    CHECK(bq::level_count(e, 9.0) == 4);
}
