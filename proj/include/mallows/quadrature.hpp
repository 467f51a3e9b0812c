#pragma once

#include <functional>

namespace mallows::quad {

// Adaptive Gauss-Kronrod (15 point) on [a, b], refining until the error
// estimate drops below `abs_tol` or `max_depth` bisections are used. The final
// estimate is written to `error` when given. Throws std::runtime_error on a
// non-finite result.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, unsigned max_depth = 15, double* error = nullptr);

// 20x20 tensor-product Gauss-Legendre rule on [x0,x1]x[y0,y1], for smooth
// integrands over small cells.
double integrate_rect(const std::function<double(double, double)>& f, double x0, double x1,
                      double y0, double y1);

}  // namespace mallows::quad
