#include "mallows/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mallows::quad {

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 unsigned max_depth, double* error) {
    using boost::math::quadrature::gauss_kronrod;
    if (a == b) {
        if (error) *error = 0.0;
        return 0.0;
    }
    double err = 0.0;
    // boost terminates on a relative criterion; derive it from a first estimate
    double est = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err);
    double rel = std::max(abs_tol / std::max(std::abs(est), 1e-300), 1e-13);
    double value = gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel, &err);
    if (!std::isfinite(value)) throw std::runtime_error("quadrature: non-finite integral");
    if (error) *error = err;
    return value;
}

double integrate_rect(const std::function<double(double, double)>& f, double x0, double x1,
                      double y0, double y1) {
    using boost::math::quadrature::gauss;
    auto inner = [&](double x) {
        return gauss<double, 20>::integrate([&](double y) { return f(x, y); }, y0, y1);
    };
    return gauss<double, 20>::integrate(inner, x0, x1);
}

}  // namespace mallows::quad
