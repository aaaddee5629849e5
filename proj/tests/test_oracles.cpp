#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <vector>

#include "bq/defaults.hpp"
#include "bq/oracles.hpp"
#include "bq/square.hpp"
#include "bq/wannier.hpp"
#include "doctest.h"

namespace {
using cplx = std::complex<double>;
}

TEST_CASE("oscillator ladder and classical radius") {
    CHECK(bq::ho_energy(0) == doctest::Approx(2.0 * M_PI));
    CHECK(bq::ho_energy(100) == doctest::Approx(4.0 * M_PI * 100.5));
    CHECK(bq::ho_circle_radius_cells(100) ==
          doctest::Approx(std::sqrt(4.0 * M_PI * 100.5) / (2.0 * M_PI)));
}

TEST_CASE("oscillator ground state is the analytic Gaussian") {
    bq::HarmonicOscillatorSpec spec{0, bq::Grid1D{-4.0, 4.0, 600}};
    auto psi = bq::ho_eigenstate(spec);
    // psi_0(x) = 2^(1/4) exp(-pi x^2) for V = 4 pi^2 x^2
    for (int i = 0; i < spec.grid.n; i += 13) {
        const double x = spec.grid.x(i);
        if (std::abs(x) > 2.0) continue;  // skip the far tail, where rel. tolerance is moot
        const double ref = std::pow(2.0, 0.25) * std::exp(-M_PI * x * x);
        CHECK(psi[i] == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("oscillator eigenstates: parity, normalization, node count") {
    for (int n : {1, 7, 100}) {
        bq::HarmonicOscillatorSpec spec{n, bq::Grid1D{-9.6, 9.6, 768}};
        auto psi = bq::ho_eigenstate(spec);
        double norm = 0.0;
        for (int i = 0; i < spec.grid.n; ++i) norm += spec.grid.w(i) * psi[i] * psi[i];
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));

        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        for (int i = 0; i < spec.grid.n; ++i)
            CHECK(psi[i] == doctest::Approx(sign * psi[spec.grid.n - 1 - i]).epsilon(1e-8));

        int nodes = 0;
        for (int i = 1; i < spec.grid.n; ++i)
            if (psi[i - 1] * psi[i] < 0.0) ++nodes;
        CHECK(nodes == n);
    }
}

TEST_CASE("oscillator oracle rejects unusable grids") {
    CHECK_THROWS(bq::ho_eigenstate({100, bq::Grid1D{-9.6, 9.6, 60}}));   // under-resolved
    CHECK_THROWS(bq::ho_eigenstate({100, bq::Grid1D{-3.0, 3.0, 768}}));  // orbit clipped
}

TEST_CASE("closed-form Gaussian overlap matches quadrature") {
    const bq::GaussianPacket1D a{0.3, 0.25, 4.0};
    const bq::GaussianPacket1D b{-0.5, 0.4, -2.5};
    const bq::Grid1D g{-8.0, 8.0, 4000};
    cplx quad{0.0, 0.0};
    for (int i = 0; i < g.n; ++i) {
        const double x = g.x(i);
        const cplx ga = std::exp(cplx(-std::pow(x - a.center, 2) / (4.0 * a.zeta * a.zeta),
                                      a.k * x));
        const cplx gb = std::exp(cplx(-std::pow(x - b.center, 2) / (4.0 * b.zeta * b.zeta),
                                      b.k * x));
        quad += g.w(i) * std::conj(ga) * gb;
    }
    const cplx ref = bq::gaussian_overlap_reference(a, b);
    CHECK(std::abs(quad - ref) < 1e-8 * std::abs(ref));

    // self-overlap is the L2 norm^2: sqrt(2 pi) zeta
    const cplx self = bq::gaussian_overlap_reference(a, a);
    CHECK(self.real() == doctest::Approx(std::sqrt(2.0 * M_PI) * a.zeta).epsilon(1e-12));
    CHECK(self.imag() == doctest::Approx(0.0));
}

TEST_CASE("analytic reference series: launch, relaxation, exact revival") {
    auto basis = bq::defaults::basis();
    const double side = 5.5;
    const double t_rev = 2.0 * side * side / M_PI;
    const std::vector<double> times{0.0, 3.0, 7.0, t_rev};
    auto series = bq::square_reference_series(bq::defaults::square_packet(), side, basis, times);
    REQUIRE(series.s.size() == 4);
    CHECK(series.characteristic_time == doctest::Approx(1.0));
    CHECK(series.s[0] < 4.0);        // localized launch packet
    CHECK(series.s[1] > series.s[0]);  // spreads
    CHECK(series.s[3] == doctest::Approx(series.s[0]).epsilon(1e-8));  // full revival
    // the launch packet is band-limited; relaxed states grow slow momentum tails from
    // the hard walls and may shed a percent past the configured momentum window
    CHECK(series.captured[0] >= 0.99);
    CHECK(series.flag[0] == 0);
    for (double cap : series.captured) CHECK(cap >= 0.98);
}

TEST_CASE("oracle projection of a pure square mode matches the grid pipeline") {
    auto basis = bq::defaults::basis();
    const double side = 5.5;
    auto sq = bq::SquareSpectrum::solve(side, -side / 2.0, side / 2.0, 20);

    // locate the (3, 2) mode and project its analytic field directly
    std::size_t idx = 20;
    for (std::size_t n = 0; n < sq.n_eig(); ++n)
        if (sq.mode(n) == std::pair<int, int>(3, 2)) idx = n;
    REQUIRE(idx < 20);

    bq::GridField psi;
    psi.grid = basis.grid();
    psi.values.resize(psi.grid.size());
    std::vector<double> buf(psi.grid.size());
    sq.eval_field(idx, psi.grid, buf.data());
    for (std::size_t i = 0; i < buf.size(); ++i) psi.values[i] = buf[i];
    psi.normalize();
    auto direct = bq::project(basis, psi);

    // same state through the sampled-spectrum overlap machinery
    auto spec = sq.sample(psi.grid, 20);
    auto w = bq::OverlapMatrix::build(basis, spec);
    std::vector<cplx> delta(20, 0.0);
    delta[idx] = 1.0;
    auto series = bq::entropy_series(w, bq::make_coefficients(delta, "square"),
                                     sq.energies(), std::vector<double>{0.0}, 1.0);
    CHECK(series.s[0] == doctest::Approx(direct.entropy()).epsilon(1e-9));
    CHECK(series.captured[0] == doctest::Approx(direct.captured).epsilon(1e-9));
}
