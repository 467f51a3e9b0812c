#include "mallows/errors.hpp"
#include "mallows/limits.hpp"
#include "mallows/meanfield.hpp"
#include "mallows/qstats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mallows;

namespace {

// O(K^4) reference: cell-averaged kernel between cells (a,b) and (c,d)
GridFunction2D brute_convolution(const GridFunction2D& u) {
    const std::size_t k = u.nx();
    const double area = u.hx() * u.hy();
    GridFunction2D out = u.like();
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            double s = 0.0;
            for (std::size_t c = 0; c < k; ++c)
                for (std::size_t d = 0; d < k; ++d) {
                    double w;
                    if (c == a || d == b)
                        w = 0.5;
                    else
                        w = ((c < a && d > b) || (c > a && d < b)) ? 1.0 : 0.0;
                    s += w * u(c, d);
                }
            out(a, b) = s * area;
        }
    return out;
}

GridFunction2D random_density(std::size_t k, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(0.2, 2.0);
    GridFunction2D u(k, k, 1.0, 1.0, GridLayout::cells);
    for (double& v : u.values()) v = dist(gen);
    return u;
}

double closed_form_error(const GridFunction2D& u, double beta) {
    double err = 0.0;
    for (std::size_t i = 0; i < u.nx(); ++i)
        for (std::size_t j = 0; j < u.ny(); ++j)
            err = std::max(err, std::abs(u(i, j) - limit_density(u.x(i), u.y(j), beta)));
    return err;
}

}  // namespace

TEST_CASE("interaction kernel") {
    CHECK(interaction(0.2, 0.8, 0.5, 0.1) == 1.0);
    CHECK(interaction(0.5, 0.1, 0.2, 0.8) == 1.0);
    CHECK(interaction(0.2, 0.1, 0.5, 0.8) == 0.0);
    CHECK(interaction(0.5, 0.8, 0.2, 0.1) == 0.0);
}

TEST_CASE("prefix-sum convolution matches the quartic reference") {
    for (std::size_t k : {1, 2, 5, 9}) {
        GridFunction2D u = random_density(k, static_cast<unsigned>(k));
        CHECK(sup_distance(h_convolution(u), brute_convolution(u)) < 1e-13);
    }
}

TEST_CASE("convolution of the uniform density is x(1-y) + (1-x)y at the centres") {
    GridFunction2D one(16, 16, 1.0, 1.0, GridLayout::cells, 1.0);
    GridFunction2D c = h_convolution(one);
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = 0; j < 16; ++j) {
            double x = c.x(i), y = c.y(j);
            CHECK(c(i, j) == doctest::Approx(x * (1 - y) + (1 - x) * y).epsilon(1e-13));
        }
}

TEST_CASE("marginal fitting hits the targets and keeps cross ratios") {
    const std::size_t k = 12;
    GridFunction2D w = random_density(k, 3);
    auto f = cell_marginal(MarginalDensity::closed_form([](double x) { return 0.5 + x; },
                                                        [](double x) { return 0.5 * x + 0.5 * x * x; }),
                           k);
    auto g = cell_marginal(MarginalDensity::uniform(), k);
    GridFunction2D u = fit_marginals(w, f, g);
    CHECK(marginal_error(u, f, g) < 1e-12);
    auto ratio = [](const GridFunction2D& v) { return v(1, 2) * v(7, 9) / (v(1, 9) * v(7, 2)); };
    CHECK(ratio(u) == doctest::Approx(ratio(w)).epsilon(1e-12));
    double hsum = 0.0;
    for (double v : f) hsum += v / k;
    CHECK(hsum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("beta = 0 gives the product density") {
    ElSolution s = solve_euler_lagrange(MarginalDensity::uniform(), MarginalDensity::uniform(), 0.0, 32);
    for (double v : s.u.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Euler-Lagrange solution approaches the closed form at second order") {
    auto uni = MarginalDensity::uniform();
    for (double beta : {-2.0, 1.5}) {
        ElSolution a = solve_euler_lagrange(uni, uni, beta, 32);
        ElSolution b = solve_euler_lagrange(uni, uni, beta, 64);
        double e1 = closed_form_error(a.u, beta);
        double e2 = closed_form_error(b.u, beta);
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
        CHECK(b.marginal_error < 1e-12);
        CHECK(el_fixed_point_residual(b.u, uni, uni, beta) < 1e-8);
        CHECK(b.final_change < 1e-10);
    }
}

TEST_CASE("Euler-Lagrange with non-uniform marginals matches the transformed closed form") {
    auto f = MarginalDensity::closed_form([](double x) { return 0.5 + x; },
                                          [](double x) { return 0.5 * x + 0.5 * x * x; });
    auto g = MarginalDensity::closed_form([](double y) { return 1.5 - y; },
                                          [](double y) { return 1.5 * y - 0.5 * y * y; });
    const double beta = 2.0;
    ElSolution s = solve_euler_lagrange(f, g, beta, 96);
    GeneralLimitDensity ref({beta, f, g});
    double err = 0.0;
    for (std::size_t i = 0; i < 96; ++i)
        for (std::size_t j = 0; j < 96; ++j) err = std::max(err, std::abs(s.u(i, j) - ref(s.u.x(i), s.u.y(j))));
    CHECK(err < 2e-3);
    // away from uniform marginals the discrete fixed point differs from the
    // continuum one at O(h^2)
    ElSolution coarse = solve_euler_lagrange(f, g, beta, 48);
    double r1 = el_fixed_point_residual(coarse.u, f, g, beta);
    double r2 = el_fixed_point_residual(s.u, f, g, beta);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("iteration budget exhaustion raises NonConvergence with diagnostics") {
    ElOptions opt;
    opt.max_iterations = 3;
    try {
        solve_euler_lagrange(MarginalDensity::uniform(), MarginalDensity::uniform(), 3.0, 32, opt);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.iterations() == 3);
        CHECK(e.last_change() > 0.0);
        CHECK(e.marginal_error() < 1e-9);
    }
}

TEST_CASE("Gibbs functional of the product density") {
    GridFunction2D one(64, 64, 1.0, 1.0, GridLayout::cells, 1.0);
    auto uni = MarginalDensity::uniform();
    GibbsFunctionalValue v = gibbs_objective(one, uni, uni, 2.0);
    CHECK(v.entropy == doctest::Approx(0.0).scale(1.0));
    CHECK(v.energy == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.objective == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("variational principle: the fixed point maximizes and attains the pressure") {
    auto uni = MarginalDensity::uniform();
    for (double beta : {-2.0, 1.0, 3.0}) {
        ElSolution s = solve_euler_lagrange(uni, uni, beta, 128);
        double best = gibbs_objective(s.u, uni, uni, beta).objective;
        CHECK(best == doctest::Approx(pressure_limit(beta).value).epsilon(1e-4));
        GridFunction2D one(128, 128, 1.0, 1.0, GridLayout::cells, 1.0);
        CHECK(gibbs_objective(one, uni, uni, beta).objective < best);
        // a competitor from the wrong temperature
        auto ones = std::vector<double>(128, 1.0);
        GridFunction2D other = fit_marginals(
            GridFunction2D::sample(128, 128, 1.0, 1.0, GridLayout::cells,
                                   [beta](double x, double y) { return limit_density(x, y, 0.5 * beta); }),
            ones, ones);
        CHECK(gibbs_objective(other, uni, uni, beta).objective < best);
    }
}

TEST_CASE("Gibbs functional input checks") {
    auto uni = MarginalDensity::uniform();
    GridFunction2D bad(8, 8, 1.0, 1.0, GridLayout::cells, 1.0);
    bad(2, 3) = 0.0;
    CHECK_THROWS_AS(gibbs_objective(bad, uni, uni, 1.0), std::invalid_argument);
    GridFunction2D heavy(8, 8, 1.0, 1.0, GridLayout::cells, 1.1);
    CHECK_THROWS_AS(gibbs_objective(heavy, uni, uni, 1.0), std::invalid_argument);
}
