#pragma once

#include <string>
#include <variant>

namespace mallows {

enum class QConvention { exp, lin };

// System size and inverse temperature, with both q parametrizations:
// q_exp = exp(-beta/(n-1)) (the Gibbs form) and q_lin = 1 - beta/n (the scaling form).
class MallowsParams {
public:
    MallowsParams(int n, double beta);

    int n() const { return n_; }
    double beta() const { return beta_; }
    double q_exp() const { return q_exp_; }
    double q_lin() const { return q_lin_; }
    // Throws std::invalid_argument if the chosen convention gives q <= 0.
    double q(QConvention convention) const;

private:
    int n_;
    double beta_;
    double q_exp_;
    double q_lin_;
};

struct LimitTag {};

struct PressureValue {
    double value;
    std::variant<int, LimitTag> n;

    bool is_limit() const { return std::holds_alternative<LimitTag>(n); }
};

struct InversionMoments {
    double mean;
    double variance;
};

// [n]_q = 1 + q + ... + q^{n-1}; exactly n at q == 1.
double q_integer(int n, double q);

// ln [n]_q! = sum_{k=1}^n ln [k]_q, in log space (no overflow for large n).
double log_q_factorial(int n, double q);

// p_n(beta) = (1/n) ln([n]_q! / n!) with q = exp(-beta/(n-1)). Needs n >= 2.
PressureValue pressure_finite(const MallowsParams& params);

// p(beta) = int_0^1 ln((1 - e^{-beta x}) / (beta x)) dx, absolute error <= 1e-10.
PressureValue pressure_limit(double beta);

// Exact mean and variance of the inversion count under the Mallows law with
// parameter q, via the independent truncated-geometric Lehmer factors.
InversionMoments inversion_moments(int n, double q);
InversionMoments inversion_moments(const MallowsParams& params,
                                   QConvention convention = QConvention::lin);

}  // namespace mallows
