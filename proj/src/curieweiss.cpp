#include "mallows/curieweiss.hpp"

#include "mallows/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mallows {

void CwParams::validate() const {
    if (spins < 1) throw std::invalid_argument("Curie-Weiss: N must be >= 1");
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("Curie-Weiss: t must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("Curie-Weiss: x must be finite");
}

namespace {

struct SectorSums {
    double log_z;  // ln sum_sigma e^{-H}
    double m1;
    double m2;
};

std::vector<double> log_binomials(int n) {
    std::vector<double> lb(n + 1);
    const double log_nfact = std::lgamma(n + 1.0);
    for (int j = 0; j <= n; ++j) lb[j] = log_nfact - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
    return lb;
}

SectorSums sector_sums(const CwParams& p, const std::vector<double>& log_binom) {
    const int n = p.spins;
    std::vector<double> lw(n + 1);
    double top = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= n; ++j) {
        double m = (2.0 * j - n) / n;
        lw[j] = log_binom[j] + n * (0.5 * p.t * m * m + p.x * m);
        top = std::max(top, lw[j]);
    }
    double z = 0.0, s1 = 0.0, s2 = 0.0;
    for (int j = 0; j <= n; ++j) {
        double m = (2.0 * j - n) / n;
        double w = std::exp(lw[j] - top);
        z += w;
        s1 += w * m;
        s2 += w * m * m;
    }
    return {top + std::log(z), s1 / z, s2 / z};
}

SectorSums sector_sums(const CwParams& p) {
    p.validate();
    return sector_sums(p, log_binomials(p.spins));
}

double log_2cosh(double z) {
    double a = std::abs(z);
    return a + std::log1p(std::exp(-2.0 * a));
}

}  // namespace

double cw_pressure_exact(const CwParams& params) {
    return sector_sums(params).log_z / params.spins;
}

double cw_magnetization(const CwParams& params) { return sector_sums(params).m1; }

CwMoments cw_moments(const CwParams& params) {
    auto s = sector_sums(params);
    return {s.m1, s.m2};
}

double cw_pressure_hs(const CwParams& params) {
    params.validate();
    if (params.t == 0.0) throw std::invalid_argument("cw_pressure_hs: needs t > 0");
    const double n = params.spins;
    const double t = params.t;
    const double x = params.x;
    auto exponent = [=](double y) { return log_2cosh(x + t * y) - 0.5 * t * y * y; };

    const double pad = 10.0 / std::sqrt(n * t);
    const double lo = -1.0 - pad;
    const double hi = 1.0 + pad;
    // The saddles solve y = tanh(x + t y) and lie in (-1, 1); a dense scan
    // locates the global maximum, used only as a stabilizing shift.
    constexpr int kScan = 4096;
    double top = -std::numeric_limits<double>::infinity();
    for (int s = 0; s <= kScan; ++s) top = std::max(top, exponent(lo + (hi - lo) * s / kScan));
    auto integrand = [&](double y) { return std::exp(n * (exponent(y) - top)); };

    // Panels narrower than the Gaussian width keep the adaptive rule from
    // stepping over a sharp peak.
    const double width = 1.0 / std::sqrt(n * std::max(t, 1e-300));
    int panels = std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 8, 4096);
    double integral = 0.0;
    for (int k = 0; k < panels; ++k) {
        double a = lo + (hi - lo) * k / panels;
        double b = lo + (hi - lo) * (k + 1) / panels;
        integral += quad::integrate(integrand, a, b, 1e-15 * (hi - lo) / panels);
    }
    double log_norm = 0.5 * std::log(n * t / (2.0 * std::numbers::pi));
    return (log_norm + std::log(integral)) / n + top;
}

BurgersResidual burgers_residual(int spins, const UniformAxis& t_axis, const UniformAxis& x_axis,
                                 double h) {
    if (t_axis.count < 1 || x_axis.count < 1) throw std::invalid_argument("burgers_residual: empty grid");
    if (t_axis.start < 0.0) throw std::invalid_argument("burgers_residual: t must be >= 0");
    if (h <= 0.0) h = std::max(t_axis.step(), x_axis.step());
    if (!(h > 0.0)) throw std::invalid_argument("burgers_residual: step must be positive");

    CwParams{spins, t_axis.start, x_axis.start}.validate();
    const std::vector<double> log_binom = log_binomials(spins);
    auto u = [&](double t, double x) { return sector_sums({spins, t, x}, log_binom).m1; };
    const double viscosity = 0.5 / spins;
    BurgersResidual out;
    out.values.resize(static_cast<std::size_t>(t_axis.count) * x_axis.count);
    for (int a = 0; a < t_axis.count; ++a) {
        double t = t_axis[a];
        for (int b = 0; b < x_axis.count; ++b) {
            double x = x_axis[b];
            double u0 = u(t, x);
            double up = u(t, x + h);
            double um = u(t, x - h);
            double ut;
            if (t >= h) {
                ut = (u(t + h, x) - u(t - h, x)) / (2 * h);
            } else {
                ut = (-3.0 * u0 + 4.0 * u(t + h, x) - u(t + 2 * h, x)) / (2 * h);
            }
            double ux = (up - um) / (2 * h);
            double uxx = (up - 2 * u0 + um) / (h * h);
            double r = ut - u0 * ux - viscosity * uxx;
            out.values[static_cast<std::size_t>(a) * x_axis.count + b] = r;
            out.max_abs = std::max(out.max_abs, std::abs(r));
        }
    }
    return out;
}

}  // namespace mallows
