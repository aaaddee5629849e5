#include "bq/ripple.hpp"

#include <lapacke.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bq {
namespace {

using Eigen::MatrixXd;

struct Tables {
    // s-direction (straightened x), orthonormal sines X_m on [-b, b]
    MatrixXd O;   // <X_m, X_m'>
    MatrixXd P;   // <X'_m, X'_m'>
    MatrixXd A;   // <s X_m, X'_m'>
    MatrixXd B;   // <s X'_m, s X'_m'>
    // y-direction, orthonormal sines Y_n on [0, 2b], weights from g(y)
    MatrixXd G;   // <Y, Y>_g
    MatrixXd Gi;  // <Y, Y>_{1/g}
    MatrixXd K;   // <Y', Y'>_g
    MatrixXd Gp;  // <Y'_n, Y_n'>_{g'}
    MatrixXd F;   // <Y, Y>_{g'^2/g}
};

double shape_g(double b, double a, double y) { return (b - a * std::cos(M_PI * y / b)) / b; }
double shape_gp(double b, double a, double y) { return (a * M_PI / (b * b)) * std::sin(M_PI * y / b); }

// Fills rows sin(m*theta_i), m = 1..M, via the Chebyshev-style recurrence.
void sine_rows(MatrixXd& S, const std::vector<double>& theta) {
    const int M = S.rows();
    const int n = int(theta.size());
    for (int i = 0; i < n; ++i) {
        const double c2 = 2.0 * std::cos(theta[i]);
        double sm1 = 0.0, s = std::sin(theta[i]);
        for (int m = 0; m < M; ++m) {
            S(m, i) = s;
            const double nxt = c2 * s - sm1;
            sm1 = s;
            s = nxt;
        }
    }
}

Tables build_tables(double b, double a, int M, int N, const QuadRule1D& qs, const QuadRule1D& qy) {
    Tables t;
    const int ns = int(qs.size()), ny = int(qy.size());
    const double inv_sqrt_b = 1.0 / std::sqrt(b);

    // X_m and X'_m on the s nodes
    std::vector<double> ths(ns);
    for (int i = 0; i < ns; ++i) ths[i] = M_PI * (qs.x[i] + b) / (2.0 * b);
    MatrixXd X(M, ns), Xd(M, ns);
    sine_rows(X, ths);
    for (int i = 0; i < ns; ++i) {
        const double c2 = 2.0 * std::cos(ths[i]);
        double cm1 = 1.0, c = std::cos(ths[i]);
        for (int m = 0; m < M; ++m) {
            Xd(m, i) = (m + 1) * M_PI / (2.0 * b) * c;
            const double nxt = c2 * c - cm1;
            cm1 = c;
            c = nxt;
        }
    }
    X *= inv_sqrt_b;
    Xd *= inv_sqrt_b;

    MatrixXd Xw = X, Xdw = Xd, Xsw = X, Xds2 = Xd;
    for (int i = 0; i < ns; ++i) {
        Xw.col(i) *= qs.w[i];
        Xdw.col(i) *= qs.w[i];
        Xsw.col(i) *= qs.w[i] * qs.x[i];
        Xds2.col(i) *= qs.w[i] * qs.x[i] * qs.x[i];
    }
    t.O.noalias() = Xw * X.transpose();
    t.P.noalias() = Xdw * Xd.transpose();
    t.A.noalias() = Xsw * Xd.transpose();  // A(m, m') = <s X_m, X'_m'>
    t.B.noalias() = Xds2 * Xd.transpose();

    // Y_n and Y'_n on the y nodes
    std::vector<double> thy(ny);
    for (int j = 0; j < ny; ++j) thy[j] = M_PI * qy.x[j] / (2.0 * b);
    MatrixXd Y(N, ny), Yd(N, ny);
    sine_rows(Y, thy);
    for (int j = 0; j < ny; ++j) {
        const double c2 = 2.0 * std::cos(thy[j]);
        double cm1 = 1.0, c = std::cos(thy[j]);
        for (int n = 0; n < N; ++n) {
            Yd(n, j) = (n + 1) * M_PI / (2.0 * b) * c;
            const double nxt = c2 * c - cm1;
            cm1 = c;
            c = nxt;
        }
    }
    Y *= inv_sqrt_b;
    Yd *= inv_sqrt_b;

    auto weighted = [&](const MatrixXd& L, const MatrixXd& R, auto&& wfun) {
        MatrixXd Lw = L;
        for (int j = 0; j < ny; ++j) Lw.col(j) *= qy.w[j] * wfun(qy.x[j]);
        MatrixXd out;
        out.noalias() = Lw * R.transpose();
        return out;
    };
    t.G = weighted(Y, Y, [&](double y) { return shape_g(b, a, y); });
    t.Gi = weighted(Y, Y, [&](double y) { return 1.0 / shape_g(b, a, y); });
    t.K = weighted(Yd, Yd, [&](double y) { return shape_g(b, a, y); });
    t.Gp = weighted(Yd, Y, [&](double y) { return shape_gp(b, a, y); });
    t.F = weighted(Y, Y, [&](double y) {
        const double gp = shape_gp(b, a, y);
        return gp * gp / shape_g(b, a, y);
    });
    return t;
}

struct SectorResult {
    std::vector<double> eigenvalues;
    std::vector<double> vectors;  // column-major, empty when values-only
    std::vector<int> ms, ns;      // global 1-based mode numbers per local index
};

// Assembles and solves one (x-parity, y-parity) sector of the generalized problem.
SectorResult solve_sector(const Tables& t, int M, int N, int pm, int pn, bool vectors) {
    SectorResult r;
    for (int m = 1; m <= M; ++m)
        if (m % 2 == pm) r.ms.push_back(m);
    for (int n = 1; n <= N; ++n)
        if (n % 2 == pn) r.ns.push_back(n);
    const int dm = int(r.ms.size()), dn = int(r.ns.size());
    const int dim = dm * dn;
    if (dim == 0) return r;

    std::vector<double> H(std::size_t(dim) * dim), S(std::size_t(dim) * dim);
    for (int a = 0; a < dim; ++a) {
        const int im = a / dn, in = a % dn;
        const int m = r.ms[im] - 1, n = r.ns[in] - 1;
        for (int bdx = a; bdx < dim; ++bdx) {
            const int jm = bdx / dn, jn = bdx % dn;
            const int mp = r.ms[jm] - 1, np = r.ns[jn] - 1;
            const double h = t.P(m, mp) * t.Gi(n, np) + t.O(m, mp) * t.K(n, np) -
                             t.A(m, mp) * t.Gp(np, n) - t.A(mp, m) * t.Gp(n, np) +
                             t.B(m, mp) * t.F(n, np);
            const double s = t.O(m, mp) * t.G(n, np);
            // column-major, lower triangle
            H[std::size_t(a) + std::size_t(bdx) * dim] = h;
            S[std::size_t(a) + std::size_t(bdx) * dim] = s;
            H[std::size_t(bdx) + std::size_t(a) * dim] = h;
            S[std::size_t(bdx) + std::size_t(a) * dim] = s;
        }
    }

    r.eigenvalues.resize(dim);
    const lapack_int info =
        LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, vectors ? 'V' : 'N', 'L', dim, H.data(), dim,
                       S.data(), dim, r.eigenvalues.data());
    if (info != 0) {
        std::ostringstream os;
        os << "ripple: dsygvd failed in sector (" << pm << "," << pn << "), info=" << info;
        throw std::runtime_error(os.str());
    }
    if (vectors) r.vectors = std::move(H);
    return r;
}

std::vector<double> merged_eigenvalues(double b, double a, int M, int N, int quad_order) {
    const QuadRule1D qs = gauss_legendre_composite(-b, b, M + 16, quad_order);
    const QuadRule1D qy = gauss_legendre_composite(0.0, 2.0 * b, N + 16, quad_order);
    const Tables t = build_tables(b, a, M, N, qs, qy);
    std::vector<double> all;
    for (int pm = 0; pm < 2; ++pm)
        for (int pn = 0; pn < 2; ++pn) {
            SectorResult r = solve_sector(t, M, N, pm, pn, false);
            all.insert(all.end(), r.eigenvalues.begin(), r.eigenvalues.end());
        }
    std::sort(all.begin(), all.end());
    return all;
}

int auto_basis(std::size_t n_eig, double b) {
    const double e_top = 4.0 * M_PI * 1.05 * double(n_eig) / (4.0 * b * b);
    int m = int(std::ceil(1.7 * 2.0 * b * std::sqrt(e_top) / M_PI));
    m += m % 2;
    return std::max(m, 24);
}

}  // namespace

RippleSpectrum RippleSpectrum::solve(const BilliardGeometry& geom, const Options& opt) {
    if (opt.n_eig > opt.cap) throw std::invalid_argument("ripple: n_eig exceeds configured cap");
    if (opt.n_eig == 0) throw std::invalid_argument("ripple: n_eig must be positive");

    RippleSpectrum sp;
    sp.geom_ = geom;
    const double b = geom.b(), a = geom.a();
    sp.m_ = opt.basis_m > 0 ? opt.basis_m : auto_basis(opt.n_eig, b);
    sp.n_ = opt.basis_n > 0 ? opt.basis_n : sp.m_;
    const int M = sp.m_, N = sp.n_;
    if (std::size_t(M) * N < 2 * opt.n_eig)
        throw std::invalid_argument("ripple: basis too small for requested n_eig");

    sp.qs_ = gauss_legendre_composite(-b, b, M + 16, opt.quad_order);
    sp.qy_ = gauss_legendre_composite(0.0, 2.0 * b, N + 16, opt.quad_order);
    const Tables t = build_tables(b, a, M, N, sp.qs_, sp.qy_);

    struct Cand {
        double e;
        int sector;
        int col;
        std::size_t tie_index;
    };
    std::vector<SectorResult> sectors;
    std::vector<Cand> cands;
    for (int pm = 0; pm < 2; ++pm)
        for (int pn = 0; pn < 2; ++pn) {
            sectors.push_back(solve_sector(t, M, N, pm, pn, true));
            const SectorResult& r = sectors.back();
            const int dim = int(r.eigenvalues.size());
            const int dn = int(r.ns.size());
            for (int c = 0; c < dim; ++c) {
                // tie-break key: global index of the dominant basis vector
                const double* v = r.vectors.data() + std::size_t(c) * dim;
                int best = 0;
                double mx = -1.0;
                for (int i = 0; i < dim; ++i)
                    if (std::abs(v[i]) > mx) {
                        mx = std::abs(v[i]);
                        best = i;
                    }
                const std::size_t gidx =
                    std::size_t(r.ms[best / dn] - 1) * N + std::size_t(r.ns[best % dn] - 1);
                cands.push_back({r.eigenvalues[c], int(sectors.size()) - 1, c, gidx});
            }
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.e != y.e) return x.e < y.e;
        return x.tie_index < y.tie_index;
    });
    if (cands.size() < opt.n_eig) throw std::runtime_error("ripple: basis produced too few modes");

    sp.energies_.resize(opt.n_eig);
    sp.coeff_.assign(opt.n_eig * std::size_t(M) * N, 0.0);
    for (std::size_t k = 0; k < opt.n_eig; ++k) {
        const Cand& c = cands[k];
        const SectorResult& r = sectors[c.sector];
        const int dim = int(r.eigenvalues.size());
        const int dn = int(r.ns.size());
        sp.energies_[k] = c.e;
        double* row = sp.coeff_.data() + k * std::size_t(M) * N;
        const double* v = r.vectors.data() + std::size_t(c.col) * dim;
        for (int i = 0; i < dim; ++i)
            row[std::size_t(r.ms[i / dn] - 1) * N + (r.ns[i % dn] - 1)] = v[i];
    }

    // Deterministic global sign: first nonzero value of the row-major scan on the
    // geometry's evaluation grid is positive.
    {
        const Grid2D& g = geom.grid();
        std::vector<double> buf(g.size());
        for (std::size_t k = 0; k < opt.n_eig; ++k) {
            sp.eval_field(k, g, buf.data());
            double mx = 0.0;
            for (double v : buf) mx = std::max(mx, std::abs(v));
            for (double v : buf) {
                if (std::abs(v) > 1e-8 * mx) {
                    if (v < 0.0) {
                        double* row = sp.coeff_.data() + k * std::size_t(M) * N;
                        for (std::size_t i = 0; i < std::size_t(M) * N; ++i) row[i] = -row[i];
                    }
                    break;
                }
            }
        }
    }

    if (opt.certify) {
        Certificate cert;
        cert.basis_m = M;
        cert.basis_n = N;
        cert.refined_m = int(std::ceil(opt.certify_factor * M));
        cert.refined_n = int(std::ceil(opt.certify_factor * N));
        cert.level = std::min<std::size_t>(opt.n_eig, 1200);
        const std::vector<double> refined =
            merged_eigenvalues(b, a, cert.refined_m, cert.refined_n, opt.quad_order);
        const double e0 = sp.energies_[cert.level - 1];
        const double e1 = refined[cert.level - 1];
        cert.rel_shift = std::abs(e0 - e1) / e1;
        cert.passed = cert.rel_shift < opt.certify_tol;
        sp.cert_ = cert;
    }
    return sp;
}

void RippleSpectrum::eval_field(std::size_t n, const Grid2D& grid, double* out) const {
    const double b = geom_.b(), a = geom_.a();
    const int M = m_, N = n_;
    const double* C = coeff_row(n);
    const double inv_sqrt_b = 1.0 / std::sqrt(b);

    std::vector<double> am(M), xs(M);
    for (int iy = 0; iy < grid.gy.n; ++iy) {
        const double y = grid.gy.x(iy);
        if (y <= 0.0 || y >= 2.0 * b) {
            for (int ix = 0; ix < grid.gx.n; ++ix) out[grid.idx(ix, iy)] = 0.0;
            continue;
        }
        // a_m(y) = sum_n C_mn Y_n(y)
        const double thy = M_PI * y / (2.0 * b);
        const double c2y = 2.0 * std::cos(thy);
        {
            double sm1 = 0.0, s = std::sin(thy);
            std::vector<double> yv(N);
            for (int k = 0; k < N; ++k) {
                yv[k] = s * inv_sqrt_b;
                const double nxt = c2y * s - sm1;
                sm1 = s;
                s = nxt;
            }
            for (int m = 0; m < M; ++m) {
                double acc = 0.0;
                const double* row = C + std::size_t(m) * N;
                for (int k = 0; k < N; ++k) acc += row[k] * yv[k];
                am[m] = acc;
            }
        }
        const double g = shape_g(b, a, y);
        for (int ix = 0; ix < grid.gx.n; ++ix) {
            const double s = grid.gx.x(ix) / g;
            if (std::abs(s) >= b) {
                out[grid.idx(ix, iy)] = 0.0;
                continue;
            }
            const double th = M_PI * (s + b) / (2.0 * b);
            const double c2 = 2.0 * std::cos(th);
            double sm1 = 0.0, sv = std::sin(th);
            double acc = 0.0;
            for (int m = 0; m < M; ++m) {
                acc += am[m] * sv;
                const double nxt = c2 * sv - sm1;
                sm1 = sv;
                sv = nxt;
            }
            out[grid.idx(ix, iy)] = acc * inv_sqrt_b;
        }
    }
}

std::vector<std::complex<double>> RippleSpectrum::expand(const ComplexField2D& psi) const {
    const double b = geom_.b(), a = geom_.a();
    const int M = m_, N = n_;
    const int ns = int(qs_.size()), ny = int(qy_.size());
    const double inv_sqrt_b = 1.0 / std::sqrt(b);

    // Sample psi on the straightened tensor nodes and normalize under the native measure.
    std::vector<std::complex<double>> vals(std::size_t(ns) * ny);
    double norm2 = 0.0;
    std::vector<double> gv(ny);
    for (int j = 0; j < ny; ++j) gv[j] = shape_g(b, a, qy_.x[j]);
    for (int j = 0; j < ny; ++j) {
        const double y = qy_.x[j];
        for (int i = 0; i < ns; ++i) {
            const std::complex<double> v = psi(qs_.x[i] * gv[j], y);
            vals[std::size_t(j) * ns + i] = v;
            norm2 += qs_.w[i] * qy_.w[j] * gv[j] * std::norm(v);
        }
    }
    if (!(norm2 > 0.0)) throw std::invalid_argument("ripple expand: state has zero norm");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : vals) v *= inv;

    // T(m, j) = sum_i w_i X_m(s_i) psi(i, j)
    std::vector<double> thetas(ns);
    for (int i = 0; i < ns; ++i) thetas[i] = M_PI * (qs_.x[i] + b) / (2.0 * b);
    MatrixXd X(M, ns);
    sine_rows(X, thetas);
    X *= inv_sqrt_b;

    std::vector<std::complex<double>> T(std::size_t(M) * ny);
    for (int j = 0; j < ny; ++j)
        for (int m = 0; m < M; ++m) {
            std::complex<double> acc = 0.0;
            const std::complex<double>* col = vals.data() + std::size_t(j) * ns;
            for (int i = 0; i < ns; ++i) acc += X(m, i) * qs_.w[i] * col[i];
            T[std::size_t(m) * ny + j] = acc;
        }

    // u(m, n) = sum_j w_j g_j Y_n(y_j) T(m, j)
    std::vector<std::complex<double>> u(std::size_t(M) * N, 0.0);
    for (int j = 0; j < ny; ++j) {
        const double thy = M_PI * qy_.x[j] / (2.0 * b);
        const double c2 = 2.0 * std::cos(thy);
        double sm1 = 0.0, s = std::sin(thy);
        const double wj = qy_.w[j] * gv[j];
        for (int n = 0; n < N; ++n) {
            const double yn = s * inv_sqrt_b * wj;
            for (int m = 0; m < M; ++m) u[std::size_t(m) * N + n] += yn * T[std::size_t(m) * ny + j];
            const double nxt = c2 * s - sm1;
            sm1 = s;
            s = nxt;
        }
    }

    std::vector<std::complex<double>> c(n_eig());
    for (std::size_t k = 0; k < n_eig(); ++k) {
        const double* row = coeff_row(k);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < std::size_t(M) * N; ++i) acc += row[i] * u[i];
        c[k] = acc;  // eigenfunctions are real: <phi|psi> = sum C u
    }
    return c;
}

std::pair<double, double> RippleSpectrum::gram_residuals(std::size_t count) const {
    const int M = m_, N = n_;
    if (count == 0 || count > n_eig()) count = n_eig();
    const Tables t = build_tables(geom_.b(), geom_.a(), M, N, qs_, qy_);

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> V(
        coeff_.data(), n_eig(), std::size_t(M) * N);
    MatrixXd D(count, std::size_t(M) * N);
    for (std::size_t k = 0; k < count; ++k) {
        Eigen::Map<const MatrixXd> Ck(coeff_row(k), N, M);  // column-major view of (M x N) row-major
        MatrixXd Dk = t.G * Ck * t.O;                       // (N x M)
        D.row(k) = Eigen::Map<const Eigen::VectorXd>(Dk.data(), Dk.size());
    }
    MatrixXd Vc(count, std::size_t(M) * N);
    for (std::size_t k = 0; k < count; ++k) {
        Eigen::Map<const MatrixXd> Ck(coeff_row(k), N, M);
        Vc.row(k) = Eigen::Map<const Eigen::VectorXd>(Ck.data(), Ck.size());
    }
    MatrixXd Gram;
    Gram.noalias() = Vc * D.transpose();
    double dn = 0.0, off = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < count; ++j) {
            const double v = Gram(i, j);
            if (i == j)
                dn = std::max(dn, std::abs(v - 1.0));
            else
                off = std::max(off, std::abs(v));
        }
    return {dn, off};
}

GridSpectrum RippleSpectrum::sample(const Grid2D& grid, std::size_t count) const {
    if (count > n_eig()) throw std::invalid_argument("ripple sample: count exceeds n_eig");
    GridSpectrum out;
    out.grid = grid;
    out.b = geom_.b();
    out.a = geom_.a();
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

GridSpectrum RippleSpectrum::sample(std::size_t count) const { return sample(geom_.grid(), count); }

}  // namespace bq
