#include "mallows/liouville.hpp"

#include "mallows/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mallows {

CauchyData::CauchyData(MarginalDensity phi, MarginalDensity psi)
    : phi_(std::move(phi)), psi_(std::move(psi)), alpha_(phi_(0.0)) {
    phi_.validate(false);
    psi_.validate(false);
    if (std::abs(phi_(0.0) - psi_(0.0)) > 1e-10) {
        std::ostringstream msg;
        msg << "Cauchy data disagree at the corner: phi(0) = " << phi_(0.0)
            << ", psi(0) = " << psi_(0.0);
        throw std::invalid_argument(msg.str());
    }
}

CauchyData CauchyData::flat(double l1, double l2) {
    auto one = [](double) { return 1.0; };
    auto ramp = [](double x) { return x; };
    return CauchyData(MarginalDensity::closed_form(one, ramp, l1, "flat"),
                      MarginalDensity::closed_form(one, ramp, l2, "flat"));
}

double existence_margin(const CauchyData& data, double beta) {
    if (beta <= 0.0) return std::numeric_limits<double>::infinity();
    return data.alpha() / beta - data.phi().total() * data.psi().total();
}

GridFunction2D cumulative_trapezoid(const GridFunction2D& u) {
    const std::size_t nx = u.nx(), ny = u.ny();
    const double hx = u.hx(), hy = u.hy();
    // first along x for every column j, then along y
    GridFunction2D cx = u.like();
    for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            cx(i, j) = cx(i - 1, j) + 0.5 * hx * (u(i - 1, j) + u(i, j));
    GridFunction2D out = u.like();
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 1; j < ny; ++j)
            out(i, j) = out(i, j - 1) + 0.5 * hy * (cx(i, j - 1) + cx(i, j));
    return out;
}

CauchySolution solve_cauchy(const CauchyData& data, double beta, std::size_t cells_x,
                            std::size_t cells_y, const CauchyOptions& options) {
    if (cells_x < 1 || cells_y < 1) throw std::invalid_argument("solve_cauchy: need at least one cell");
    const double alpha = data.alpha();
    if (beta > 0.0) {
        double margin = existence_margin(data, beta);
        if (margin < options.margin_floor * alpha / beta) {
            std::ostringstream msg;
            msg << "no integrable solution: alpha/beta - Phi(L1) Psi(L2) = " << margin
                << " (beta = " << beta << ")";
            throw ExistenceViolated(msg.str(), margin);
        }
    }

    GridFunction2D base(cells_x + 1, cells_y + 1, data.l1(), data.l2());
    std::vector<double> log_phi(base.nx()), log_psi(base.ny());
    for (std::size_t i = 0; i < base.nx(); ++i) log_phi[i] = std::log(data.phi()(base.x(i)));
    for (std::size_t j = 0; j < base.ny(); ++j) log_psi[j] = std::log(data.psi()(base.y(j)));
    const double log_alpha = std::log(alpha);
    for (std::size_t i = 0; i < base.nx(); ++i)
        for (std::size_t j = 0; j < base.ny(); ++j)
            base(i, j) = log_phi[i] + log_psi[j] - log_alpha;

    CauchySolution sol;
    if (options.initial) {
        if (options.initial->nx() != base.nx() || options.initial->ny() != base.ny()) {
            throw std::invalid_argument("solve_cauchy: initial iterate has the wrong shape");
        }
        sol.u = *options.initial;
    } else {
        sol.u = base.like();
        for (std::size_t k = 0; k < base.values().size(); ++k)
            sol.u.values()[k] = std::exp(base.values()[k]);
    }

    double damping = options.damping;
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        GridFunction2D integral = cumulative_trapezoid(sol.u);
        double change = 0.0;
        auto uv = sol.u.values();
        auto iv = integral.values();
        auto bv = base.values();
        for (std::size_t k = 0; k < uv.size(); ++k) {
            double next = std::exp(bv[k] + 2.0 * beta * iv[k]);
            double mixed = (1.0 - damping) * uv[k] + damping * next;
            change = std::max(change, std::abs(mixed - uv[k]));
            uv[k] = mixed;
        }
        if (!std::isfinite(change)) {
            throw NonConvergence("Picard iteration diverged", it, change);
        }
        sol.iterations = it;
        sol.final_change = change;
        if (change < options.tolerance) {
            sol.damping = damping;
            return sol;
        }
        double ratio = change / previous;
        sol.contraction = ratio;
        if (it > 3 && ratio > options.contraction_switch && damping > options.boundary_damping) {
            damping = options.boundary_damping;
        }
        previous = change;
    }
    std::ostringstream msg;
    msg << "Picard iteration did not reach " << options.tolerance << " in "
        << options.max_iterations << " iterations (last change " << sol.final_change
        << ", contraction " << sol.contraction << ")";
    throw NonConvergence(msg.str(), sol.iterations, sol.final_change);
}

GridFunction2D liouville_residual(const GridFunction2D& u, double beta) {
    GridFunction2D r = u.like();
    const double scale = 1.0 / (4.0 * u.hx() * u.hy());
    for (std::size_t i = 1; i + 1 < u.nx(); ++i) {
        for (std::size_t j = 1; j + 1 < u.ny(); ++j) {
            double cross = std::log(u(i + 1, j + 1)) - std::log(u(i + 1, j - 1)) -
                           std::log(u(i - 1, j + 1)) + std::log(u(i - 1, j - 1));
            r(i, j) = cross * scale - 2.0 * beta * u(i, j);
        }
    }
    return r;
}

Reparametrization Reparametrization::identity() {
    return {[](double x) { return x; }, [](double) { return 1.0; }};
}

GridFunction2D scaling_transform(const GridFunction2D& u, const Reparametrization& f,
                                 const Reparametrization& g, std::size_t nx, std::size_t ny,
                                 double lx, double ly) {
    if (u.layout() != GridLayout::nodes) throw std::invalid_argument("scaling_transform: node grid expected");
    GridFunction2D v(nx, ny, lx, ly);
    std::vector<double> fx(nx), dfx(nx), gy(ny), dgy(ny);
    const double slack = 1e-12 * std::max(u.lx(), u.ly());
    auto check = [slack](const std::vector<double>& m, const std::vector<double>& d, double limit,
                         const char* axis) {
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (!(d[k] > 0.0)) {
                throw std::invalid_argument(std::string("scaling_transform: ") + axis +
                                            " map has nonpositive derivative");
            }
            if (k > 0 && !(m[k] > m[k - 1])) {
                throw std::invalid_argument(std::string("scaling_transform: ") + axis +
                                            " map is not strictly increasing");
            }
            if (m[k] < -slack || m[k] > limit + slack) {
                throw std::invalid_argument(std::string("scaling_transform: ") + axis +
                                            " map leaves the source domain");
            }
        }
    };
    for (std::size_t i = 0; i < nx; ++i) {
        fx[i] = f.map(v.x(i));
        dfx[i] = f.derivative(v.x(i));
    }
    for (std::size_t j = 0; j < ny; ++j) {
        gy[j] = g.map(v.y(j));
        dgy[j] = g.derivative(v.y(j));
    }
    check(fx, dfx, u.lx(), "x");
    check(gy, dgy, u.ly(), "y");
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            v(i, j) = dfx[i] * dgy[j] * u.interpolate(fx[i], gy[j]);
    return v;
}

}  // namespace mallows
