#include "mallows/grid.hpp"

#include <algorithm>
#include <cmath>

namespace mallows {

double GridFunction2D::interpolate(double x, double y) const {
    if (layout_ != GridLayout::nodes) {
        throw std::logic_error("interpolate: only defined on node grids");
    }
    double fx = std::clamp(x / hx(), 0.0, static_cast<double>(nx_ - 1));
    double fy = std::clamp(y / hy(), 0.0, static_cast<double>(ny_ - 1));
    // snap coordinates that hit a node up to rounding, so node samples are reproduced exactly
    if (std::abs(fx - std::round(fx)) < 1e-9) fx = std::round(fx);
    if (std::abs(fy - std::round(fy)) < 1e-9) fy = std::round(fy);
    std::size_t i = std::min(static_cast<std::size_t>(fx), nx_ - 2);
    std::size_t j = std::min(static_cast<std::size_t>(fy), ny_ - 2);
    double tx = fx - i;
    double ty = fy - j;
    const auto& u = *this;
    return (1 - tx) * ((1 - ty) * u(i, j) + ty * u(i, j + 1)) +
           tx * ((1 - ty) * u(i + 1, j) + ty * u(i + 1, j + 1));
}

double GridFunction2D::integral() const {
    double area = hx() * hy();
    if (layout_ == GridLayout::cells) {
        double s = 0.0;
        for (double v : values_) s += v;
        return s * area;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < nx_; ++i) {
        double wx = (i == 0 || i == nx_ - 1) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < ny_; ++j) {
            double wy = (j == 0 || j == ny_ - 1) ? 0.5 : 1.0;
            s += wx * wy * (*this)(i, j);
        }
    }
    return s * area;
}

double sup_distance(const GridFunction2D& a, const GridFunction2D& b) {
    if (a.nx() != b.nx() || a.ny() != b.ny()) throw std::invalid_argument("grid shape mismatch");
    double m = 0.0;
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t k = 0; k < va.size(); ++k) m = std::max(m, std::abs(va[k] - vb[k]));
    return m;
}

}  // namespace mallows
