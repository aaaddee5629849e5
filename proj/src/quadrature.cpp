#include "bq/grid.hpp"

#include <cmath>

namespace bq {
namespace {

// Nodes/weights of the n-point Gauss-Legendre rule on [-1, 1] by Newton iteration
// on the Legendre polynomial (standard Golub-free construction, fine for n <= 32).
void gl_reference(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

}  // namespace

QuadRule1D gauss_legendre_composite(double lo, double hi, int panels, int order) {
    if (panels < 1 || order < 1) throw std::invalid_argument("gauss_legendre_composite: bad rule");
    std::vector<double> xr, wr;
    gl_reference(order, xr, wr);
    QuadRule1D q;
    q.x.reserve(std::size_t(panels) * order);
    q.w.reserve(std::size_t(panels) * order);
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        const double a = lo + p * h;
        for (int i = 0; i < order; ++i) {
            q.x.push_back(a + 0.5 * h * (xr[i] + 1.0));
            q.w.push_back(0.5 * h * wr[i]);
        }
    }
    return q;
}

}  // namespace bq
