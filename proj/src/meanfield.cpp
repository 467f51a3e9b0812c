#include "mallows/meanfield.hpp"

#include "mallows/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mallows {

namespace {

void require_unit_cells(const GridFunction2D& u) {
    if (u.layout() != GridLayout::cells || u.nx() != u.ny() || u.lx() != 1.0 || u.ly() != 1.0) {
        throw std::invalid_argument("expected a square cell grid on [0,1]^2");
    }
}

}  // namespace

double interaction(double x1, double y1, double x2, double y2) {
    auto theta = [](double s) { return s > 0.0 ? 1.0 : 0.0; };
    return theta(x1 - x2) * theta(y2 - y1) + theta(x2 - x1) * theta(y1 - y2);
}

GridFunction2D h_convolution(const GridFunction2D& u) {
    require_unit_cells(u);
    const std::size_t k = u.nx();
    const double area = u.hx() * u.hy();
    // prefix(a, b) = mass of cells i < a, j < b
    std::vector<double> prefix((k + 1) * (k + 1), 0.0);
    auto P = [&](std::size_t a, std::size_t b) -> double& { return prefix[a * (k + 1) + b]; };
    for (std::size_t a = 1; a <= k; ++a)
        for (std::size_t b = 1; b <= k; ++b)
            P(a, b) = u(a - 1, b - 1) * area + P(a - 1, b) + P(a, b - 1) - P(a - 1, b - 1);

    GridFunction2D c = u.like();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double upper_left = P(i, k) - P(i, j + 1);   // i' < i, j' > j
            double lower_right = P(k, j) - P(i + 1, j);  // i' > i, j' < j
            double column = P(i + 1, k) - P(i, k);       // i' = i
            double row = P(k, j + 1) - P(k, j);          // j' = j
            c(i, j) = upper_left + lower_right + 0.5 * (column + row - u(i, j) * area);
        }
    }
    return c;
}

std::vector<double> cell_marginal(const MarginalDensity& f, std::size_t cells) {
    std::vector<double> out(cells);
    double h = 1.0 / static_cast<double>(cells);
    double total = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        out[i] = f((i + 0.5) * h);
        total += out[i] * h;
    }
    for (double& v : out) v /= total;
    return out;
}

double marginal_error(const GridFunction2D& u, const std::vector<double>& f,
                      const std::vector<double>& g) {
    double err = 0.0;
    for (std::size_t i = 0; i < u.nx(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < u.ny(); ++j) s += u(i, j);
        err = std::max(err, std::abs(s * u.hy() - f[i]));
    }
    for (std::size_t j = 0; j < u.ny(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.nx(); ++i) s += u(i, j);
        err = std::max(err, std::abs(s * u.hx() - g[j]));
    }
    return err;
}

GridFunction2D fit_marginals(GridFunction2D w, const std::vector<double>& f,
                             const std::vector<double>& g, double tolerance, int max_sweeps) {
    require_unit_cells(w);
    const std::size_t k = w.nx();
    if (f.size() != k || g.size() != k) throw std::invalid_argument("fit_marginals: size mismatch");
    const double h = w.hx();
    std::vector<double> sums(k);
    double err = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += w(i, j);
            double scale = f[i] / (s * h);
            for (std::size_t j = 0; j < k; ++j) w(i, j) *= scale;
        }
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sums[j] += w(i, j);
        for (std::size_t j = 0; j < k; ++j) sums[j] = g[j] / (sums[j] * h);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) w(i, j) *= sums[j];
        // columns now exact; rows carry the remaining error
        err = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += w(i, j);
            err = std::max(err, std::abs(s * h - f[i]));
        }
        if (err < tolerance) return w;
    }
    throw NonConvergence("iterative proportional fitting did not converge", max_sweeps, err, err);
}

ElSolution solve_euler_lagrange(const MarginalDensity& f, const MarginalDensity& g, double beta,
                                std::size_t cells, const ElOptions& options) {
    f.validate(true);
    g.validate(true);
    if (cells < 2) throw std::invalid_argument("solve_euler_lagrange: need at least 2 cells");
    const std::vector<double> fc = cell_marginal(f, cells);
    const std::vector<double> gc = cell_marginal(g, cells);

    GridFunction2D product(cells, cells, 1.0, 1.0, GridLayout::cells);
    for (std::size_t i = 0; i < cells; ++i)
        for (std::size_t j = 0; j < cells; ++j) product(i, j) = fc[i] * gc[j];

    ElSolution sol;
    if (options.initial) {
        if (options.initial->nx() != cells || options.initial->ny() != cells) {
            throw std::invalid_argument("solve_euler_lagrange: initial density has the wrong shape");
        }
        sol.u = fit_marginals(*options.initial, fc, gc, options.ipfp_tolerance);
    } else {
        sol.u = product;
    }

    double damping = options.damping;
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= options.max_iterations; ++it) {
        GridFunction2D conv = h_convolution(sol.u);
        GridFunction2D w = product;
        // shift the exponent so that its maximum is 0; IPFP removes the constant
        double lo = *std::min_element(conv.values().begin(), conv.values().end());
        double hi = *std::max_element(conv.values().begin(), conv.values().end());
        double shift = beta >= 0.0 ? lo : hi;
        auto wv = w.values();
        auto cv = conv.values();
        for (std::size_t k = 0; k < wv.size(); ++k) wv[k] *= std::exp(-beta * (cv[k] - shift));
        w = fit_marginals(std::move(w), fc, gc, options.ipfp_tolerance);
        wv = w.values();

        double change = 0.0;
        auto uv = sol.u.values();
        for (std::size_t k = 0; k < uv.size(); ++k) {
            double mixed = (1.0 - damping) * uv[k] + damping * wv[k];
            change = std::max(change, std::abs(mixed - uv[k]));
            uv[k] = mixed;
        }
        sol.iterations = it;
        sol.final_change = change;
        if (!std::isfinite(change)) {
            throw NonConvergence("Euler-Lagrange iteration diverged", it, change);
        }
        if (change < options.tolerance) break;
        if (change > previous && damping > options.min_damping) damping *= 0.5;
        previous = change;
        if (it == options.max_iterations) {
            double merr = marginal_error(sol.u, fc, gc);
            std::ostringstream msg;
            msg << "Euler-Lagrange iteration stalled: change " << change << ", marginal error "
                << merr;
            throw NonConvergence(msg.str(), it, change, merr);
        }
    }
    sol.damping = damping;
    sol.marginal_error = marginal_error(sol.u, fc, gc);
    return sol;
}

GibbsFunctionalValue gibbs_objective(const GridFunction2D& u, const MarginalDensity& f,
                                     const MarginalDensity& g, double beta) {
    require_unit_cells(u);
    for (double v : u.values()) {
        if (!(v > 0.0)) throw std::invalid_argument("gibbs_objective: density must be positive");
    }
    const std::size_t k = u.nx();
    const std::vector<double> fc = cell_marginal(f, k);
    const std::vector<double> gc = cell_marginal(g, k);
    double merr = marginal_error(u, fc, gc);
    if (merr > 1e-6) {
        std::ostringstream msg;
        msg << "gibbs_objective: marginal error " << merr << " exceeds 1e-6";
        throw std::invalid_argument(msg.str());
    }
    GridFunction2D conv = h_convolution(u);
    const double area = u.hx() * u.hy();
    double entropy = 0.0, energy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double v = u(i, j);
            entropy -= v * std::log(v / (fc[i] * gc[j]));
            energy += v * conv(i, j);
        }
    }
    entropy *= area;
    energy *= area;
    return {entropy, energy, entropy - 0.5 * beta * energy};
}

double el_fixed_point_residual(const GridFunction2D& u, const MarginalDensity& f,
                               const MarginalDensity& g, double beta) {
    require_unit_cells(u);
    const std::size_t k = u.nx();
    const std::vector<double> fc = cell_marginal(f, k);
    const std::vector<double> gc = cell_marginal(g, k);
    GridFunction2D conv = h_convolution(u);
    GridFunction2D r = u.like();
    double mean = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            r(i, j) = std::log(u(i, j)) - std::log(fc[i]) - std::log(gc[j]) + beta * conv(i, j);
            mean += r(i, j);
        }
    }
    mean /= static_cast<double>(k * k);
    double sup = 0.0;
    for (double v : r.values()) sup = std::max(sup, std::abs(v - mean));
    return sup;
}

}  // namespace mallows
