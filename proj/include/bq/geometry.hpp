#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bq/grid.hpp"

namespace bq {

// Hard-wall ripple billiard bounded by x = +-(b - a*cos(pi*y/b)), y in [0, 2b].
// a = 0 degenerates to the 2b x 2b square.
class BilliardGeometry {
public:
    static BilliardGeometry build(double b, double a, int nx, int ny);

    double b() const { return b_; }
    double a() const { return a_; }
    int nx() const { return grid_.gx.n; }
    int ny() const { return grid_.gy.n; }

    // Bounding box [-(b+a), b+a] x [0, 2b].
    const Grid2D& grid() const { return grid_; }

    // Half-width of the domain at height y.
    double half_width(double y) const;
    bool inside(double x, double y) const;
    bool inside_node(int ix, int iy) const { return mask_[grid_.idx(ix, iy)] != 0; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }

    double area() const { return 4.0 * b_ * b_; }  // cosine integrates to zero over [0, 2b]
    double mask_area() const;
    double perimeter() const;  // numeric arc length of the two walls + flat top/bottom

    const std::vector<std::string>& warnings() const { return warnings_; }
    std::string config_key() const;

private:
    double b_ = 0.0;
    double a_ = 0.0;
    Grid2D grid_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::string> warnings_;
};

}  // namespace bq
