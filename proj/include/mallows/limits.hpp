#pragma once

#include "mallows/grid.hpp"
#include "mallows/marginal.hpp"

#include <optional>

namespace mallows {

// Below this |beta| every closed form switches to its second-order Taylor branch.
inline constexpr double kSmallBeta = 1e-8;

// Limit density of the empirical measure of a Mallows(1 - beta/n) permutation:
//   u(x,y) = (beta/2) sinh(beta/2) / (e^{beta/4} cosh(beta(x-y)/2)
//                                     - e^{-beta/4} cosh(beta(x+y-1)/2))^2
// Exactly 1 at beta = 0. Overflows for |beta| beyond ~700.
double limit_density(double x, double y, double beta);

// The same density assembled from the Cauchy-problem solution
//   alpha phi(x) phi(y) / (alpha - beta Phi(x) Phi(y))^2,
//   phi(z) = beta e^{-beta z}/(1 - e^{-beta}), Phi(z) = (1 - e^{-beta z})/(1 - e^{-beta}),
//   alpha = phi(0).
// Algebraically equal to limit_density; kept as an independent route.
double limit_density_composed(double x, double y, double beta);

// Boundary data of the composed form.
double edge_density(double z, double beta);     // phi(z)
double edge_cumulative(double z, double beta);  // Phi(z)
double edge_alpha(double beta);                 // phi(0) = beta/(1 - e^{-beta})

struct LimitDensityParams {
    double beta = 0.0;
    std::optional<MarginalDensity> f;  // defaults to uniform
    std::optional<MarginalDensity> g;
};

// Limit density with prescribed marginals f, g (F, G their primitives): u with
// x -> F(x), y -> G(y), multiplied by f(x) g(y). Throws std::invalid_argument
// if f or g is not a bounded, bounded-below probability density.
double limit_density_general(double x, double y, const LimitDensityParams& params);

// Validated, reusable evaluator for limit_density_general (checks run once).
class GeneralLimitDensity {
public:
    explicit GeneralLimitDensity(LimitDensityParams params);
    double operator()(double x, double y) const;
    double beta() const { return beta_; }

private:
    double beta_;
    MarginalDensity f_;
    MarginalDensity g_;
};

// Blocking-measure profile rho(x;y) = int_0^y u(x,y') dy':
//   rho = (1 - e^{-beta y}) e^{-beta x} / ((1 - e^{-beta}) - (1 - e^{-beta x})(1 - e^{-beta y})),
// evaluated in a rearranged form that stays finite for large |beta|.
double blocking_profile(double x, double y, double beta);

// Equivalent hyperbolic form
//   e^{beta(1/2 - x)/2} sinh(beta y/2) / (e^{beta/4} cosh(beta(x-y)/2) - e^{-beta/4} cosh(beta(x+y-1)/2)).
double blocking_profile_hyperbolic(double x, double y, double beta);

// rho(y + t/beta; y; beta). As beta -> infinity this tends to 1/(1 + e^t),
// the lattice-scale step profile. Rejects y + t/beta outside [0,1] or y outside (0,1).
double profile_lattice_limit(double t, double y, double beta);

// K x K cell masses of u(.,.;beta) on [0,1]^2 by Gauss-Legendre quadrature per cell.
GridFunction2D limit_cell_masses(int bins, double beta);

}  // namespace mallows
