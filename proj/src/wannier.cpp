#include "bq/wannier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bq/kernels.hpp"

namespace bq {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

void WannierLatticeParams::validate() const {
    if (std::abs(x0 * k0 - kTwoPi) > 1e-12 * kTwoPi)
        throw std::invalid_argument("wannier: completeness requires x0 * k0 = 2*pi");
    if (!(zeta > 0.0)) throw std::invalid_argument("wannier: zeta must be positive");
    if (j_pos_hi < j_pos_lo || j_mom_hi < j_mom_lo)
        throw std::invalid_argument("wannier: empty index range");
}

Wannier1D Wannier1D::build(const WannierLatticeParams& params, const Grid1D& grid) {
    params.validate();
    Wannier1D w;
    w.params_ = params;
    w.grid_ = grid;

    const int nf = params.n_funcs();
    const int ng = grid.n;

    const double pos_lo = params.pos_offset + params.j_pos_lo * params.x0;
    const double pos_hi = params.pos_offset + params.j_pos_hi * params.x0;
    if (grid.lo > pos_lo || grid.hi < pos_hi)
        throw std::invalid_argument("wannier: grid does not cover the position lattice");
    const double pad = 4.0 * params.zeta;
    if (grid.lo > pos_lo - pad || grid.hi < pos_hi + pad)
        w.warnings_.push_back("grid pads the lattice by less than 4*zeta; tails are truncated");

    const double jk_max = std::max(std::abs(params.j_mom_lo), std::abs(params.j_mom_hi));
    const double nyquist = M_PI / grid.dx();
    const double fast = jk_max * params.k0;
    if (nyquist < fast + 2.0 / params.zeta)
        throw std::invalid_argument("wannier: grid Nyquist below the fastest lattice oscillation");
    if (nyquist < fast + 4.0 / params.zeta)
        w.warnings_.push_back("grid Nyquist within 4/zeta of the fastest oscillation");

    // Gaussian frame, one column per (j_pos, j_mom), momentum fastest.
    MatrixXcd G(ng, nf);
    for (int jp = params.j_pos_lo; jp <= params.j_pos_hi; ++jp)
        for (int jm = params.j_mom_lo; jm <= params.j_mom_hi; ++jm) {
            const int f = w.index(jp, jm);
            for (int i = 0; i < ng; ++i) {
                const double x = grid.x(i);
                const double d = x - (params.pos_offset + jp * params.x0);
                const double env = std::exp(-d * d / (4.0 * params.zeta * params.zeta));
                const double ph = jm * params.k0 * x;
                G(i, f) = std::complex<double>(env * std::cos(ph), env * std::sin(ph));
            }
        }

    VectorXd qw(ng);
    for (int i = 0; i < ng; ++i) qw(i) = grid.w(i);

    auto inv_sqrt = [](const MatrixXcd& S, double* cond) {
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(S);
        const VectorXd& ev = es.eigenvalues();
        const double lmin = ev(0), lmax = ev(ev.size() - 1);
        if (cond) *cond = lmax / lmin;
        if (!(lmin > 1e-14 * lmax)) {
            std::ostringstream os;
            os << "wannier: overlap matrix numerically singular, eigenvalue range [" << lmin
               << ", " << lmax << "]";
            throw std::invalid_argument(os.str());
        }
        MatrixXcd out = es.eigenvectors() *
                        ev.cwiseInverse().cwiseSqrt().asDiagonal() *
                        es.eigenvectors().adjoint();
        return out;
    };

    MatrixXcd S = G.adjoint() * qw.asDiagonal() * G;
    MatrixXcd W = G * inv_sqrt(S, &w.cond_);

    // One refinement pass: the residual Gram is ~identity, and re-symmetrizing it removes
    // the roundoff amplified by the frame condition number.
    MatrixXcd S1 = W.adjoint() * qw.asDiagonal() * W;
    if ((S1 - MatrixXcd::Identity(nf, nf)).cwiseAbs().maxCoeff() > 5e-13)
        W = W * inv_sqrt(S1, nullptr);

    w.re_.resize(std::size_t(nf) * ng);
    w.im_.resize(std::size_t(nf) * ng);
    for (int f = 0; f < nf; ++f)
        for (int i = 0; i < ng; ++i) {
            w.re_[std::size_t(f) * ng + i] = W(i, f).real();
            w.im_[std::size_t(f) * ng + i] = W(i, f).imag();
        }
    return w;
}

double Wannier1D::gram_residual() const {
    const int nf = n_funcs(), ng = grid_.n;
    std::vector<double> wre(std::size_t(nf) * ng), wim(wre.size());
    for (int f = 0; f < nf; ++f)
        for (int i = 0; i < ng; ++i) {
            const double qw = grid_.w(i);
            wre[std::size_t(f) * ng + i] = re(f)[i] * qw;
            wim[std::size_t(f) * ng + i] = im(f)[i] * qw;
        }
    double worst = 0.0;
    const auto& k = kern::active();
    for (int i = 0; i < nf; ++i)
        for (int j = i; j < nf; ++j) {
            const std::complex<double> ov =
                k.cdotc(wre.data() + std::size_t(i) * ng, wim.data() + std::size_t(i) * ng,
                        re(j).data(), im(j).data(), ng);
            worst = std::max(worst, std::abs(ov - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

double Wannier1D::overlap_condition() const { return cond_; }

std::vector<std::complex<double>> Wannier1D::amplitudes(
    std::span<const std::complex<double>> psi) const {
    if (psi.size() != std::size_t(grid_.n))
        throw std::invalid_argument("wannier amplitudes: state grid mismatch");
    const int nf = n_funcs(), ng = grid_.n;
    std::vector<double> pre(ng), pim(ng);
    for (int i = 0; i < ng; ++i) {
        pre[i] = psi[i].real() * grid_.w(i);
        pim[i] = psi[i].imag() * grid_.w(i);
    }
    std::vector<std::complex<double>> a(nf);
    for (int f = 0; f < nf; ++f)
        a[f] = kern::active().cdotc(re(f).data(), im(f).data(), pre.data(), pim.data(), ng);
    return a;
}

WannierBasis2D WannierBasis2D::build(Wannier1D bx, Wannier1D by, std::size_t max_cells) {
    const std::size_t n = std::size_t(bx.n_funcs()) * by.n_funcs();
    if (n > max_cells)
        throw std::invalid_argument("wannier 2d: cell count exceeds the memory budget");
    WannierBasis2D b;
    b.bx_ = std::move(bx);
    b.by_ = std::move(by);
    return b;
}

std::size_t WannierBasis2D::flat_index(const Cell& c) const {
    const auto& px = bx_.params();
    const auto& py = by_.params();
    const std::size_t ix = c.jx - px.j_pos_lo;
    const std::size_t iy = c.jy - py.j_pos_lo;
    const std::size_t ikx = c.jkx - px.j_mom_lo;
    const std::size_t iky = c.jky - py.j_mom_lo;
    return ((ix * py.n_pos() + iy) * px.n_mom() + ikx) * py.n_mom() + iky;
}

WannierBasis2D::Cell WannierBasis2D::cell(std::size_t flat) const {
    const auto& px = bx_.params();
    const auto& py = by_.params();
    Cell c;
    c.jky = int(flat % py.n_mom()) + py.j_mom_lo;
    flat /= py.n_mom();
    c.jkx = int(flat % px.n_mom()) + px.j_mom_lo;
    flat /= px.n_mom();
    c.jy = int(flat % py.n_pos()) + py.j_pos_lo;
    flat /= py.n_pos();
    c.jx = int(flat) + px.j_pos_lo;
    return c;
}

Wannier1D Wannier1D::from_raw(const WannierLatticeParams& params, const Grid1D& grid,
                              std::vector<double> re, std::vector<double> im, double cond) {
    params.validate();
    const std::size_t expect = std::size_t(params.n_funcs()) * grid.n;
    if (re.size() != expect || im.size() != expect)
        throw std::invalid_argument("wannier: cached row payload has the wrong size");
    Wannier1D w;
    w.params_ = params;
    w.grid_ = grid;
    w.re_ = std::move(re);
    w.im_ = std::move(im);
    w.cond_ = cond;
    return w;
}

std::string WannierBasis2D::config_key() const {
    std::ostringstream os;
    os.precision(17);
    const auto& px = bx_.params();
    const auto& py = by_.params();
    os << "x0=" << px.x0 << ";ox=" << px.pos_offset << ";oy=" << py.pos_offset << ";zx=" << px.zeta
       << ";jx=[" << px.j_pos_lo << "," << px.j_pos_hi
       << "];jkx=[" << px.j_mom_lo << "," << px.j_mom_hi << "];jy=[" << py.j_pos_lo << ","
       << py.j_pos_hi << "];jky=[" << py.j_mom_lo << "," << py.j_mom_hi << "];gx=["
       << bx_.grid().lo << "," << bx_.grid().hi << "," << bx_.grid().n << "];gy=["
       << by_.grid().lo << "," << by_.grid().hi << "," << by_.grid().n << "]";
    return os.str();
}

double entropy(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) {
        if (v < -1e-12) throw std::invalid_argument("entropy: negative probability");
        if (v > 0.0) s -= v * std::log(v);
    }
    return s;
}

double PhaseSpaceDistribution::entropy() const { return bq::entropy(p); }

std::vector<std::complex<double>> project_amplitudes(const WannierBasis2D& basis,
                                                     const GridField& state) {
    const Grid2D g = basis.grid();
    if (!(state.grid == g)) throw std::invalid_argument("project: state grid mismatch");
    const int nx = g.gx.n, ny = g.gy.n;
    const int nfx = basis.bx().n_funcs(), nfy = basis.by().n_funcs();
    const auto& k = kern::active();

    // Split the state; y rows are contiguous.
    std::vector<double> pre(g.size()), pim(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        pre[i] = state.values[i].real();
        pim[i] = state.values[i].imag();
    }

    // Stage 1: T(fy, ix) = sum_iy conj(v_fy) psi(ix, iy) w_y
    std::vector<double> vre(ny), vim(ny);
    std::vector<double> Tre(std::size_t(nfy) * nx), Tim(std::size_t(nfy) * nx);
    for (int fy = 0; fy < nfy; ++fy) {
        for (int iy = 0; iy < ny; ++iy) {
            const double qw = g.gy.w(iy);
            vre[iy] = basis.by().re(fy)[iy] * qw;
            vim[iy] = basis.by().im(fy)[iy] * qw;
        }
        for (int ix = 0; ix < nx; ++ix) {
            const std::complex<double> t = k.cdotc(vre.data(), vim.data(),
                                                   pre.data() + std::size_t(ix) * ny,
                                                   pim.data() + std::size_t(ix) * ny, ny);
            Tre[std::size_t(fy) * nx + ix] = t.real();
            Tim[std::size_t(fy) * nx + ix] = t.imag();
        }
    }

    // Stage 2: A(fx, fy) = sum_ix conj(u_fx) w_x T(fy, ix)
    std::vector<double> ure(nx), uim(nx);
    std::vector<std::complex<double>> amp(std::size_t(nfx) * nfy);
    for (int fx = 0; fx < nfx; ++fx) {
        for (int ix = 0; ix < nx; ++ix) {
            const double qw = g.gx.w(ix);
            ure[ix] = basis.bx().re(fx)[ix] * qw;
            uim[ix] = basis.bx().im(fx)[ix] * qw;
        }
        for (int fy = 0; fy < nfy; ++fy)
            amp[std::size_t(fx) * nfy + fy] =
                k.cdotc(ure.data(), uim.data(), Tre.data() + std::size_t(fy) * nx,
                        Tim.data() + std::size_t(fy) * nx, nx);
    }
    return amp;
}

PhaseSpaceDistribution project(const WannierBasis2D& basis, const GridField& state) {
    if (std::abs(state.norm2() - 1.0) > 1e-6)
        throw std::invalid_argument("project: state not L2-normalized on its grid");
    const auto amp = project_amplitudes(basis, state);

    const auto& px = basis.bx().params();
    const auto& py = basis.by().params();
    const int nkx = px.n_mom(), nky = py.n_mom();
    const int nfy = basis.by().n_funcs();

    PhaseSpaceDistribution d;
    d.p.assign(basis.size(), 0.0);
    for (int fx = 0; fx < basis.bx().n_funcs(); ++fx)
        for (int fy = 0; fy < nfy; ++fy) {
            const WannierBasis2D::Cell c{px.j_pos_lo + fx / nkx, py.j_pos_lo + fy / nky,
                                         px.j_mom_lo + fx % nkx, py.j_mom_lo + fy % nky};
            const double v = std::norm(amp[std::size_t(fx) * nfy + fy]);
            d.p[basis.flat_index(c)] = v;
            d.captured += v;
        }
    d.truncated = d.captured < 0.99;
    if (d.captured > 0.0)
        for (double& v : d.p) v /= d.captured;
    return d;
}

PhaseSpaceDistribution project_1d(const Wannier1D& basis,
                                  std::span<const std::complex<double>> psi) {
    double n2 = 0.0;
    for (int i = 0; i < basis.grid().n; ++i) n2 += basis.grid().w(i) * std::norm(psi[i]);
    if (std::abs(n2 - 1.0) > 1e-6)
        throw std::invalid_argument("project_1d: state not L2-normalized on its grid");
    const auto amp = basis.amplitudes(psi);
    PhaseSpaceDistribution d;
    d.p.resize(amp.size());
    for (std::size_t f = 0; f < amp.size(); ++f) {
        d.p[f] = std::norm(amp[f]);
        d.captured += d.p[f];
    }
    d.truncated = d.captured < 0.99;
    if (d.captured > 0.0)
        for (double& v : d.p) v /= d.captured;
    return d;
}

}  // namespace bq
