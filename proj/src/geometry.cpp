#include "bq/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bq {

BilliardGeometry BilliardGeometry::build(double b, double a, int nx, int ny) {
    if (!(b > 0.0)) throw std::invalid_argument("geometry: b must be positive");
    if (a < 0.0) throw std::invalid_argument("geometry: a must be non-negative");
    if (a >= b) throw std::invalid_argument("geometry: a >= b, boundary self-intersects");
    if (nx < 64 || ny < 64) throw std::invalid_argument("geometry: grid must be at least 64x64");

    BilliardGeometry g;
    g.b_ = b;
    g.a_ = a;
    g.grid_.gx = Grid1D{-(b + a), b + a, nx};
    g.grid_.gy = Grid1D{0.0, 2.0 * b, ny};

    g.mask_.assign(g.grid_.size(), 0);
    for (int ix = 0; ix < nx; ++ix) {
        const double x = g.grid_.gx.x(ix);
        for (int iy = 0; iy < ny; ++iy) {
            if (g.inside(x, g.grid_.gy.x(iy))) g.mask_[g.grid_.idx(ix, iy)] = 1;
        }
    }

    // A coarse grid is allowed but flagged: the area estimate degrades visibly.
    const double rel = std::abs(g.mask_area() - g.area()) / g.area();
    if (rel > 0.02) {
        std::ostringstream os;
        os << "grid too coarse: mask area off by " << rel * 100.0 << "%";
        g.warnings_.push_back(os.str());
    }
    return g;
}

double BilliardGeometry::half_width(double y) const {
    return b_ - a_ * std::cos(M_PI * y / b_);
}

bool BilliardGeometry::inside(double x, double y) const {
    if (y <= 0.0 || y >= 2.0 * b_) return false;
    return std::abs(x) < half_width(y);
}

double BilliardGeometry::mask_area() const {
    std::size_t count = 0;
    for (auto m : mask_) count += m;
    return double(count) * grid_.cell_area();
}

double BilliardGeometry::perimeter() const {
    // Two walls x = +-(b - a cos(pi y/b)) plus the flat segments at y = 0 and y = 2b.
    const QuadRule1D q = gauss_legendre_composite(0.0, 2.0 * b_, 64, 8);
    double arc = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double slope = (a_ * M_PI / b_) * std::sin(M_PI * q.x[i] / b_);
        arc += q.w[i] * std::sqrt(1.0 + slope * slope);
    }
    return 2.0 * arc + 2.0 * 2.0 * (b_ - a_);
}

std::string BilliardGeometry::config_key() const {
    std::ostringstream os;
    os.precision(17);
    os << "b=" << b_ << ";a=" << a_ << ";nx=" << nx() << ";ny=" << ny();
    return os.str();
}

}  // namespace bq
