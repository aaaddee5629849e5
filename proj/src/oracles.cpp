#include "bq/oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "bq/square.hpp"

namespace bq {

double ho_energy(int n) { return 4.0 * M_PI * (n + 0.5); }

double ho_circle_radius_cells(int n) { return std::sqrt(ho_energy(n)) / (2.0 * M_PI); }

std::vector<double> ho_eigenstate(const HarmonicOscillatorSpec& spec) {
    if (spec.n < 0 || spec.n > 200)
        throw std::invalid_argument("oscillator oracle supports n in [0, 200]");
    const double alpha = std::sqrt(2.0 * M_PI);  // kHoPotential^(1/4)
    const double kmax = std::sqrt(ho_energy(spec.n));
    const double nyquist = M_PI / spec.grid.dx();
    if (nyquist < 1.5 * kmax)
        throw std::invalid_argument("oscillator grid under-resolved: Nyquist " +
                                    std::to_string(nyquist) + " < 1.5 * " +
                                    std::to_string(kmax));
    const double turn = kmax / alpha / alpha;  // sqrt(E/v)
    if (spec.grid.lo > -turn - 4.0 / alpha || spec.grid.hi < turn + 4.0 / alpha)
        throw std::invalid_argument("oscillator grid does not contain the classical orbit");

    // normalized Hermite functions by upward recurrence, evaluated pointwise
    std::vector<double> psi(spec.grid.n);
    for (int i = 0; i < spec.grid.n; ++i) {
        const double u = alpha * spec.grid.x(i);
        double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u);
        double h1 = std::sqrt(2.0) * u * h0;
        double h = spec.n == 0 ? h0 : h1;
        for (int m = 1; m < spec.n; ++m) {
            h = std::sqrt(2.0 / (m + 1.0)) * u * h1 - std::sqrt(double(m) / (m + 1.0)) * h0;
            h0 = h1;
            h1 = h;
        }
        psi[i] = std::sqrt(alpha) * h;
    }
    double n2 = 0.0;
    for (int i = 0; i < spec.grid.n; ++i) n2 += spec.grid.w(i) * psi[i] * psi[i];
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : psi) v *= inv;
    return psi;
}

std::complex<double> gaussian_overlap_reference(const GaussianPacket1D& a,
                                                const GaussianPacket1D& b) {
    // integral exp(-p x^2 + q x + r) dx = sqrt(pi/p) exp(q^2/(4p) + r)
    const double pa = 1.0 / (4.0 * a.zeta * a.zeta);
    const double pb = 1.0 / (4.0 * b.zeta * b.zeta);
    const double p = pa + pb;
    const std::complex<double> q(2.0 * pa * a.center + 2.0 * pb * b.center, b.k - a.k);
    const double r = -pa * a.center * a.center - pb * b.center * b.center;
    return std::sqrt(M_PI / p) * std::exp(q * q / (4.0 * p) + r);
}

EntropyTimeSeries square_reference_series(const GaussianPacket& packet, double side,
                                          const WannierBasis2D& basis,
                                          std::span<const double> times) {
    const auto sq = SquareSpectrum::solve(side, packet.xc - side / 2.0, packet.yc - side / 2.0,
                                          1300);
    const auto coeffs = make_coefficients(sq.expand(packet.field()), "square-analytic");
    const auto spec = sq.sample(basis.grid(), sq.n_eig());
    const auto w = OverlapMatrix::build(basis, spec);
    return entropy_series(w, coeffs, sq.energies(), times,
                          characteristic_time(side, packet.kx));
}

}  // namespace bq
