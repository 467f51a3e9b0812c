#pragma once

#include <vector>

namespace mallows {

// N spins with H_N = -N (t m^2/2 + x m), m the mean spin.
struct CwParams {
    int spins;
    double t;  // coupling, >= 0
    double x;  // external field

    // Throws std::invalid_argument on N < 1, t < 0 or non-finite values.
    void validate() const;
};

struct CwMoments {
    double m1;  // <m>
    double m2;  // <m^2>
};

// p_N = (1/N) ln sum_sigma e^{-H_N}, as a log-sum-exp over the N+1
// magnetization sectors with binomial multiplicities.
double cw_pressure_exact(const CwParams& params);

// Same pressure through the Gaussian linearization
//   (1/N) ln int sqrt(Nt/2pi) exp(N(ln 2cosh(x+ty) - t y^2/2)) dy,
// integrated adaptively over [-1, 1] padded by 10/sqrt(Nt). Rejects t = 0.
double cw_pressure_hs(const CwParams& params);

// <m_N> from the sector weights; equals d p_N/dx.
double cw_magnetization(const CwParams& params);
CwMoments cw_moments(const CwParams& params);

struct UniformAxis {
    double start;
    double stop;
    int count;  // >= 2 (or 1 with start == stop)

    double step() const { return count > 1 ? (stop - start) / (count - 1) : 0.0; }
    double operator[](int k) const { return start + k * step(); }
};

struct BurgersResidual {
    std::vector<double> values;  // t-major: values[a * x.count + b]
    double max_abs = 0.0;
};

// r = d_t u_N - u_N d_x u_N - (1/2N) d_xx u_N at every (t_a, x_b), with
// u_N = cw_magnetization and second-order differences of step `h`
// (defaults to the grid spacing). Derivatives in t are one-sided at t < h
// since t must stay nonnegative.
BurgersResidual burgers_residual(int spins, const UniformAxis& t_axis, const UniformAxis& x_axis,
                                 double h = 0.0);

}  // namespace mallows
