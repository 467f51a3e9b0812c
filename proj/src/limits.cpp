#include "mallows/limits.hpp"

#include "mallows/quadrature.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mallows {

namespace {

// Second-order Taylor coefficients in beta; both are products of shifted
// Legendre-type polynomials in x and y.
double density_series(double x, double y, double beta) {
    double a1 = 0.5 * (2 * x - 1) * (2 * y - 1);
    double a2 = (6 * x * x - 6 * x + 1) * (6 * y * y - 6 * y + 1) / 12.0;
    return 1.0 + beta * a1 + beta * beta * a2;
}

double profile_series(double x, double y, double beta) {
    double c1 = 0.5 * y * (2 * x - 1) * (y - 1);
    double c2 = y * (y - 1) * (2 * y - 1) * (6 * x * x - 6 * x + 1) / 12.0;
    return y + beta * c1 + beta * beta * c2;
}

// e^{beta/4} cosh(beta(x-y)/2) - e^{-beta/4} cosh(beta(x+y-1)/2), rewritten as
// 2 sinh(beta/4) cosh(beta(x-y)/2) + 2 e^{-beta/4} sinh(beta(2x-1)/4) sinh(beta(1-2y)/4)
// so that small beta does not cancel. Negative beta goes through
// d(x,y,beta) = -d(1-x,y,-beta), keeping the second term the smaller one.
double hyperbolic_denominator(double x, double y, double beta) {
    if (beta < 0.0) return -hyperbolic_denominator(1.0 - x, y, -beta);
    return 2.0 * std::sinh(beta / 4) * std::cosh(beta * (x - y) / 2) +
           2.0 * std::exp(-beta / 4) * std::sinh(beta * (2 * x - 1) / 4) *
               std::sinh(beta * (1 - 2 * y) / 4);
}

}  // namespace

double limit_density(double x, double y, double beta) {
    if (beta == 0.0) return 1.0;
    if (std::abs(beta) < kSmallBeta) return density_series(x, y, beta);
    double d = hyperbolic_denominator(x, y, beta);
    // (beta/2) sinh(beta/2) > 0 for beta != 0, and d has the sign of beta on the closed square
    assert(d * beta > 0.0);
    return 0.5 * beta * std::sinh(0.5 * beta) / (d * d);
}

double edge_alpha(double beta) {
    if (std::abs(beta) < kSmallBeta) return 1.0 + beta / 2 + beta * beta / 12;
    return -beta / std::expm1(-beta);
}

double edge_density(double z, double beta) {
    return edge_alpha(beta) * std::exp(-beta * z);
}

double edge_cumulative(double z, double beta) {
    if (std::abs(beta) < kSmallBeta) return z + 0.5 * beta * z * (1 - z);
    return std::expm1(-beta * z) / std::expm1(-beta);
}

double limit_density_composed(double x, double y, double beta) {
    if (beta == 0.0) return 1.0;
    if (std::abs(beta) < kSmallBeta) return density_series(x, y, beta);
    double alpha = edge_alpha(beta);
    double d = alpha - beta * edge_cumulative(x, beta) * edge_cumulative(y, beta);
    return alpha * edge_density(x, beta) * edge_density(y, beta) / (d * d);
}

GeneralLimitDensity::GeneralLimitDensity(LimitDensityParams params)
    : beta_(params.beta),
      f_(params.f ? std::move(*params.f) : MarginalDensity::uniform()),
      g_(params.g ? std::move(*params.g) : MarginalDensity::uniform()) {
    if (std::abs(f_.length() - 1.0) > 1e-12 || std::abs(g_.length() - 1.0) > 1e-12) {
        throw std::invalid_argument("limit_density_general: marginals must live on [0,1]");
    }
    f_.validate(true);
    g_.validate(true);
}

double GeneralLimitDensity::operator()(double x, double y) const {
    return f_(x) * g_(y) * limit_density(f_.cumulative(x), g_.cumulative(y), beta_);
}

double limit_density_general(double x, double y, const LimitDensityParams& params) {
    return GeneralLimitDensity(params)(x, y);
}

double blocking_profile(double x, double y, double beta) {
    if (beta == 0.0) return y;
    if (std::abs(beta) < kSmallBeta) return profile_series(x, y, beta);
    if (beta > 0.0) {
        // divide through by e^{-beta x}
        double num = -std::expm1(-beta * y);
        double rest = beta * (1 - y) < 700.0
                          ? std::exp(-beta * (1 - x)) * std::expm1(beta * (1 - y))
                          : std::exp(beta * (x - y)) - std::exp(-beta * (1 - x));
        return num / (num + rest);
    }
    // divide through by e^{-beta x} e^{-beta y}
    double num = std::expm1(beta * y);
    double rest = beta * (y - 1) < 700.0 ? std::exp(beta * x) * std::expm1(beta * (y - 1))
                                         : std::exp(beta * (x + y - 1)) - std::exp(beta * x);
    return num / (num - rest);
}

double blocking_profile_hyperbolic(double x, double y, double beta) {
    if (beta == 0.0) return y;
    if (std::abs(beta) < kSmallBeta) return profile_series(x, y, beta);
    return std::exp(beta * (0.5 - x) / 2) * std::sinh(beta * y / 2) /
           hyperbolic_denominator(x, y, beta);
}

double profile_lattice_limit(double t, double y, double beta) {
    if (!(y > 0.0 && y < 1.0)) throw std::invalid_argument("profile_lattice_limit: y must be in (0,1)");
    if (beta == 0.0) throw std::invalid_argument("profile_lattice_limit: beta must be nonzero");
    double x = y + t / beta;
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument("profile_lattice_limit: y + t/beta = " + std::to_string(x) +
                                    " outside [0,1]");
    }
    return blocking_profile(x, y, beta);
}

GridFunction2D limit_cell_masses(int bins, double beta) {
    if (bins < 1) throw std::invalid_argument("limit_cell_masses: bins must be >= 1");
    GridFunction2D g(bins, bins, 1.0, 1.0, GridLayout::cells);
    double h = 1.0 / bins;
    auto u = [beta](double x, double y) { return limit_density(x, y, beta); };
    for (int a = 0; a < bins; ++a)
        for (int b = 0; b < bins; ++b)
            g(a, b) = quad::integrate_rect(u, a * h, (a + 1) * h, b * h, (b + 1) * h);
    return g;
}

}  // namespace mallows
