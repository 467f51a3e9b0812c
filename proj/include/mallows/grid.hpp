#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mallows {

// Where samples sit on [0,lx]x[0,ly]: on the nx x ny corner nodes
// (x_i = i*lx/(nx-1)), or at the centres of nx x ny cells (x_i = (i+1/2)*lx/nx).
enum class GridLayout { nodes, cells };

// Sampled function on a uniform rectangle. Storage is x-major: (i, j) at i*ny + j.
class GridFunction2D {
public:
    GridFunction2D() = default;
    GridFunction2D(std::size_t nx, std::size_t ny, double lx, double ly,
                   GridLayout layout = GridLayout::nodes, double fill = 0.0)
        : nx_(nx), ny_(ny), lx_(lx), ly_(ly), layout_(layout), values_(nx * ny, fill) {
        if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("grid extents must be positive");
        std::size_t min_n = layout == GridLayout::nodes ? 2 : 1;
        if (nx < min_n || ny < min_n) throw std::invalid_argument("grid too small");
    }

    // Same shape and layout, new values.
    GridFunction2D like(double fill = 0.0) const {
        return GridFunction2D(nx_, ny_, lx_, ly_, layout_, fill);
    }

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    GridLayout layout() const { return layout_; }

    double hx() const { return layout_ == GridLayout::nodes ? lx_ / (nx_ - 1) : lx_ / nx_; }
    double hy() const { return layout_ == GridLayout::nodes ? ly_ / (ny_ - 1) : ly_ / ny_; }
    double x(std::size_t i) const {
        return layout_ == GridLayout::nodes ? i * hx() : (i + 0.5) * hx();
    }
    double y(std::size_t j) const {
        return layout_ == GridLayout::nodes ? j * hy() : (j + 0.5) * hy();
    }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * ny_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * ny_ + j]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

    // Bilinear interpolation on a node grid; arguments are clamped to the domain.
    double interpolate(double x, double y) const;

    // Sum of values times cell area (midpoint rule on cells, trapezoid on nodes).
    double integral() const;

    template <class F>
    static GridFunction2D sample(std::size_t nx, std::size_t ny, double lx, double ly,
                                 GridLayout layout, F&& f) {
        GridFunction2D g(nx, ny, lx, ly, layout);
        for (std::size_t i = 0; i < nx; ++i)
            for (std::size_t j = 0; j < ny; ++j) g(i, j) = f(g.x(i), g.y(j));
        return g;
    }

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double lx_ = 1.0;
    double ly_ = 1.0;
    GridLayout layout_ = GridLayout::nodes;
    std::vector<double> values_;
};

double sup_distance(const GridFunction2D& a, const GridFunction2D& b);

}  // namespace mallows
