#pragma once

#include "mallows/grid.hpp"
#include "mallows/marginal.hpp"

#include <optional>
#include <vector>

namespace mallows {

// h((x1,y1),(x2,y2)) = theta(x1-x2) theta(y2-y1) + theta(x2-x1) theta(y1-y2):
// 1 when the two points form an inversion (one is left of and above the other).
double interaction(double x1, double y1, double x2, double y2);

// C(x,y) = int int h((x,y),(x',y')) u(x',y') dx'dy' for a density u on a K x K
// cell grid over [0,1]^2, treating u as constant on each cell and averaging
// the kernel over the evaluation cell. Pairs in the same row or column of cells
// get weight 1/2, as does the cell itself. O(K^2) via 2D prefix sums.
GridFunction2D h_convolution(const GridFunction2D& u);

// Marginal targets of a density on K cells: f at the cell centres,
// rescaled so that sum_i f_i h = 1.
std::vector<double> cell_marginal(const MarginalDensity& f, std::size_t cells);

// Iterative proportional fitting: rescales rows and columns of a positive
// cell grid until sum_j w_ij h = f_i and sum_i w_ij h = g_j, to `tolerance`
// in sup norm. Throws NonConvergence after `max_sweeps`.
GridFunction2D fit_marginals(GridFunction2D w, const std::vector<double>& f,
                             const std::vector<double>& g, double tolerance = 1e-13,
                             int max_sweeps = 100000);

// sup over rows and columns of the marginal mismatch.
double marginal_error(const GridFunction2D& u, const std::vector<double>& f,
                      const std::vector<double>& g);

struct ElOptions {
    double damping = 0.5;      // lambda in u <- (1-lambda) u + lambda w'
    double min_damping = 1.0 / 1024;
    double tolerance = 1e-10;  // sup-norm change between iterates
    int max_iterations = 20000;
    double ipfp_tolerance = 1e-13;
    // starting density (projected onto the marginals first); defaults to f(x) g(y)
    std::optional<GridFunction2D> initial;
};

struct ElSolution {
    GridFunction2D u;  // K x K cell grid on [0,1]^2
    int iterations = 0;
    double final_change = 0.0;
    double marginal_error = 0.0;
    double damping = 0.0;
};

// Constrained fixed point of u = f g exp(-beta h*u) / Z with marginals f, g:
// each sweep forms w = f g exp(-beta h*u), fits w to the marginals, and mixes
// it into u. Damping halves whenever the change grows. Throws NonConvergence
// with the last marginal error when the iteration budget runs out.
ElSolution solve_euler_lagrange(const MarginalDensity& f, const MarginalDensity& g, double beta,
                                std::size_t cells, const ElOptions& options = {});

struct GibbsFunctionalValue {
    double entropy;    // -int u ln(u / (f g))
    double energy;     // int u (h*u)
    double objective;  // entropy - (beta/2) energy
};

// Rejects densities with nonpositive cells or marginals off by more than 1e-6.
GibbsFunctionalValue gibbs_objective(const GridFunction2D& u, const MarginalDensity& f,
                                     const MarginalDensity& g, double beta);

// sup |ln u - ln f - ln g + beta h*u - c| with c the least-squares constant.
double el_fixed_point_residual(const GridFunction2D& u, const MarginalDensity& f,
                               const MarginalDensity& g, double beta);

}  // namespace mallows
