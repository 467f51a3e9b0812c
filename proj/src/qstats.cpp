#include "mallows/qstats.hpp"

#include "mallows/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mallows {

namespace {

void check_q(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw std::invalid_argument("q must be a positive finite real, got " + std::to_string(q));
    }
}

// ln |e^a - 1| without overflow for large a.
double log_abs_expm1(double a) {
    if (a > 30.0) return a + std::log1p(-std::exp(-a));
    return std::log(std::abs(std::expm1(a)));
}

// 1/(e^z - 1) - 1/z, regular at z = 0.
double bernoulli_gap(double z) {
    if (std::abs(z) < 0.1) {
        double z2 = z * z;
        return -0.5 + z * (1.0 / 12.0 + z2 * (-1.0 / 720.0 + z2 * (1.0 / 30240.0 -
                                                                  z2 / 1209600.0)));
    }
    return 1.0 / std::expm1(z) - 1.0 / z;
}

// e^z/(e^z - 1)^2 - 1/z^2, regular at z = 0.
double variance_gap(double z) {
    if (std::abs(z) < 0.1) {
        double z2 = z * z;
        return -1.0 / 12.0 +
               z2 * (1.0 / 240.0 + z2 * (-1.0 / 6048.0 + z2 * (1.0 / 172800.0 -
                                                                z2 / 5322240.0)));
    }
    double s = 2.0 * std::sinh(0.5 * z);
    return 1.0 / (s * s) - 1.0 / (z * z);
}

}  // namespace

MallowsParams::MallowsParams(int n, double beta) : n_(n), beta_(beta) {
    if (n < 1) throw std::invalid_argument("MallowsParams: n must be >= 1");
    if (!std::isfinite(beta)) throw std::invalid_argument("MallowsParams: beta must be finite");
    q_exp_ = (n == 1 || beta == 0.0) ? 1.0 : std::exp(-beta / (n - 1));
    q_lin_ = 1.0 - beta / n;
}

double MallowsParams::q(QConvention convention) const {
    double q = convention == QConvention::exp ? q_exp_ : q_lin_;
    if (!(q > 0.0)) {
        throw std::invalid_argument("q_lin = 1 - beta/n is not positive (beta >= n)");
    }
    return q;
}

double q_integer(int n, double q) {
    if (n < 1) throw std::invalid_argument("q_integer: n must be >= 1");
    check_q(q);
    if (q == 1.0) return static_cast<double>(n);
    double l = std::log(q);
    return std::expm1(n * l) / std::expm1(l);
}

double log_q_factorial(int n, double q) {
    if (n < 1) throw std::invalid_argument("log_q_factorial: n must be >= 1");
    check_q(q);
    double sum = 0.0;
    if (q == 1.0) {
        for (int k = 2; k <= n; ++k) sum += std::log(static_cast<double>(k));
        return sum;
    }
    double l = std::log(q);
    double denom = log_abs_expm1(l);
    for (int k = 2; k <= n; ++k) sum += log_abs_expm1(k * l) - denom;
    return sum;
}

PressureValue pressure_finite(const MallowsParams& params) {
    int n = params.n();
    if (n < 2) throw std::invalid_argument("pressure_finite: n must be >= 2");
    if (params.beta() == 0.0) return {0.0, n};
    double lq = log_q_factorial(n, params.q_exp());
    return {(lq - std::lgamma(n + 1.0)) / n, n};
}

PressureValue pressure_limit(double beta) {
    if (!std::isfinite(beta)) throw std::invalid_argument("pressure_limit: beta must be finite");
    if (beta == 0.0) return {0.0, LimitTag{}};
    auto integrand = [beta](double x) {
        double z = beta * x;
        if (std::abs(z) < 1e-3) {
            double z2 = z * z;
            return -0.5 * z + z2 / 24.0 - z2 * z2 / 2880.0;
        }
        return std::log(-std::expm1(-z) / z);
    };
    double err = 0.0;
    double value = quad::integrate(integrand, 0.0, 1.0, 1e-12, 30, &err);
    if (err > 1e-10) throw std::runtime_error("pressure_limit: quadrature error above 1e-10");
    return {value, LimitTag{}};
}

InversionMoments inversion_moments(int n, double q) {
    if (n < 1) throw std::invalid_argument("inversion_moments: n must be >= 1");
    check_q(q);
    // Z_j on {0..j-1} with weights q^k; with s = -ln q:
    //   E Z_j   = [1/(e^s-1) - 1/s] - j [1/(e^{js}-1) - 1/(js)]
    //   Var Z_j = [e^s/(e^s-1)^2 - 1/s^2] - j^2 [same at js]
    double s = -std::log(q);
    double mean = 0.0;
    double var = 0.0;
    double b1 = bernoulli_gap(s);
    double v1 = variance_gap(s);
    for (int j = 2; j <= n; ++j) {
        double js = j * s;
        mean += b1 - j * bernoulli_gap(js);
        var += v1 - static_cast<double>(j) * j * variance_gap(js);
    }
    return {mean, var};
}

InversionMoments inversion_moments(const MallowsParams& params, QConvention convention) {
    return inversion_moments(params.n(), params.q(convention));
}

}  // namespace mallows
