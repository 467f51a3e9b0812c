#pragma once

#include "mallows/grid.hpp"
#include "mallows/marginal.hpp"

#include <functional>
#include <optional>

namespace mallows {

// Cauchy data for d^2/dxdy ln u = 2 beta u on [0,L1]x[0,L2]:
// u(x,0) = phi(x), u(0,y) = psi(y), phi(0) = psi(0) = alpha.
class CauchyData {
public:
    // Throws std::invalid_argument unless phi, psi are bounded with a positive
    // lower bound and |phi(0) - psi(0)| <= 1e-10.
    CauchyData(MarginalDensity phi, MarginalDensity psi);

    // phi = psi = 1 on [0,l1] x [0,l2].
    static CauchyData flat(double l1 = 1.0, double l2 = 1.0);

    const MarginalDensity& phi() const { return phi_; }
    const MarginalDensity& psi() const { return psi_; }
    double alpha() const { return alpha_; }
    double l1() const { return phi_.length(); }
    double l2() const { return psi_.length(); }

private:
    MarginalDensity phi_;
    MarginalDensity psi_;
    double alpha_;
};

// alpha/beta - Phi(L1) Psi(L2) for beta > 0 (positive: a solution exists),
// +infinity for beta <= 0.
double existence_margin(const CauchyData& data, double beta);

struct CauchyOptions {
    double tolerance = 1e-12;  // sup-norm change between iterates
    int max_iterations = 10000;
    double damping = 1.0;  // initial relaxation weight of the new iterate
    // switch to `boundary_damping` once successive changes shrink slower than this
    double contraction_switch = 0.9;
    double boundary_damping = 0.5;
    // refuse margins below margin_floor * alpha/beta
    double margin_floor = 1e-6;
    // starting iterate; defaults to phi(x) psi(y) / alpha
    std::optional<GridFunction2D> initial;
};

struct CauchySolution {
    GridFunction2D u;  // node grid on [0,L1]x[0,L2]
    int iterations = 0;
    double final_change = 0.0;
    double contraction = 0.0;  // last ratio of successive changes
    double damping = 1.0;      // relaxation weight in use at exit
};

// Solves ln u = ln phi(x) + ln psi(y) - ln alpha + 2 beta int_0^x int_0^y u
// by damped Picard iteration on (cells_x+1) x (cells_y+1) corner nodes, with
// the double integral taken by the cumulative 2D trapezoid rule.
// Throws ExistenceViolated when the margin is not comfortably positive and
// NonConvergence when the iteration stalls or blows up.
CauchySolution solve_cauchy(const CauchyData& data, double beta, std::size_t cells_x,
                            std::size_t cells_y, const CauchyOptions& options = {});

// Cumulative trapezoid integral I(i,j) = int_0^{x_i} int_0^{y_j} u on a node grid.
GridFunction2D cumulative_trapezoid(const GridFunction2D& u);

// Finite-difference residual of d^2/dxdy ln u - 2 beta u, central cross
// differences at interior nodes; edge nodes carry the Cauchy data and report 0.
GridFunction2D liouville_residual(const GridFunction2D& u, double beta);

// Strictly increasing differentiable map of the target interval into the source domain.
struct Reparametrization {
    std::function<double(double)> map;
    std::function<double(double)> derivative;

    static Reparametrization identity();
};

// v(x,y) = F'(x) G'(y) u(F(x), G(y)) on a node grid over [0,lx]x[0,ly], using
// bilinear interpolation of u. If u solves the Liouville equation, so does v.
// Rejects maps that are not increasing, have nonpositive derivative, or leave
// u's domain.
GridFunction2D scaling_transform(const GridFunction2D& u, const Reparametrization& f,
                                 const Reparametrization& g, std::size_t nx, std::size_t ny,
                                 double lx, double ly);

}  // namespace mallows
