#include "mallows/parallel.hpp"
#include "mallows/qstats.hpp"
#include "mallows/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numeric>

using namespace mallows;

TEST_CASE("truncated geometric: stratified inverse CDF reproduces the law") {
    const int m = 200000;
    for (double q : {0.3, 1.0, 1.8}) {
        for (int j : {1, 2, 5, 13}) {
            std::vector<double> freq(j, 0.0);
            for (int s = 0; s < m; ++s) {
                int z = truncated_geometric(j, std::log(q), (s + 0.5) / m);
                if (z < 0 || z >= j) FAIL("draw out of range: " << z);
                freq[z] += 1.0 / m;
            }
            double norm = 0.0;
            for (int k = 0; k < j; ++k) norm += std::pow(q, k);
            for (int k = 0; k < j; ++k) CHECK(std::abs(freq[k] - std::pow(q, k) / norm) < 2.0 / m);
        }
    }
}

TEST_CASE("truncated geometric stays in range at extreme inputs") {
    for (double lq : {-50.0, -1e-12, 0.0, 1e-12, 50.0})
        for (double u : {1e-300, 1e-16, 0.5, 1.0 - 1e-16}) {
            int z = truncated_geometric(1000, lq, u);
            CHECK(z >= 0);
            CHECK(z < 1000);
        }
}

TEST_CASE("exact distribution is normalized and matches q^inv / [n]_q!") {
    for (double q : {0.4, 1.0, 2.2}) {
        ExactDistribution d = exact_distribution(5, q);
        double total = 0.0;
        for (const auto& [p, w] : d.entries()) {
            total += w;
            CHECK(w == doctest::Approx(std::pow(q, inversions(p)) / std::exp(log_q_factorial(5, q))));
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(d.entries().size() == 120);
        CHECK(d.probability(Permutation::identity(5)) == doctest::Approx(d.entries().front().second));
    }
    CHECK_THROWS_AS(exact_distribution(11, 0.5), std::invalid_argument);
}

TEST_CASE("complement symmetry: P_q(pi) = P_{1/q}(complement of pi)") {
    ExactDistribution a = exact_distribution(6, 0.55);
    ExactDistribution b = exact_distribution(6, 1.0 / 0.55);
    for (const auto& [p, w] : a.entries())
        CHECK(w == doctest::Approx(b.probability(p.complement())).epsilon(1e-12));
}

TEST_CASE("sampler is reproducible from (seed, stream)") {
    StreamRng r1(42, 7), r2(42, 7), r3(42, 8);
    Permutation a = sample_mallows(30, 0.9, r1);
    Permutation b = sample_mallows(30, 0.9, r2);
    Permutation c = sample_mallows(30, 0.9, r3);
    CHECK(a == b);
    CHECK_FALSE(a == c);
}

TEST_CASE("batch does not depend on the thread count") {
    setenv("MLL_THREADS", "1", 1);
    auto one = sample_mallows_batch(25, 0.8, 300, 9);
    GridFunction2D h1 = mallows_histogram(100, 0.97, 500, 5, 3);
    setenv("MLL_THREADS", "5", 1);
    auto many = sample_mallows_batch(25, 0.8, 300, 9);
    GridFunction2D h5 = mallows_histogram(100, 0.97, 500, 5, 3);
    unsetenv("MLL_THREADS");
    CHECK(one == many);
    CHECK(sup_distance(h1, h5) == 0.0);
}

TEST_CASE("sampled law is close to the exact law in total variation") {
    const int n = 4;
    const double q = 0.7;
    const std::size_t m = 200000;
    std::vector<std::uint64_t> counts(24, 0);
    for (const Permutation& p : sample_mallows_batch(n, q, m, 123)) ++counts[lex_rank(p)];
    CHECK(total_variation(counts, exact_distribution(n, q)) < 0.01);
}

TEST_CASE("sampled inversion count matches the exact moments") {
    for (double q : {0.95, 1.0, 1.04}) {
        const int n = 60;
        const std::size_t m = 20000;
        auto draws = sample_mallows_batch(n, q, m, 77);
        double s1 = 0, s2 = 0;
        for (const auto& p : draws) {
            double d = static_cast<double>(inversions(p));
            s1 += d;
            s2 += d * d;
        }
        InversionMoments exact = inversion_moments(n, q);
        double mean = s1 / m;
        CHECK(std::abs(mean - exact.mean) < 5 * std::sqrt(exact.variance / m));
        double var = s2 / m - mean * mean;
        CHECK(var == doctest::Approx(exact.variance).epsilon(0.05));
    }
}

TEST_CASE("sampler handles q near 0 and very large q") {
    StreamRng rng(1, 1);
    CHECK(sample_mallows(50, 1e-12, rng) == Permutation::identity(50));
    CHECK(sample_mallows(50, 1e12, rng) == Permutation::reversal(50));
    CHECK_THROWS_AS(sample_mallows(5, 0.0, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_mallows(MallowsParams(10, 20.0), QConvention::lin, rng), std::invalid_argument);
}

TEST_CASE("histogram cells follow the half-open binning") {
    // n = 4, K = 2: positions 1,2 -> bin 0; 3,4 -> bin 1; same for values
    std::vector<Permutation> one = {Permutation({3, 1, 4, 2})};
    GridFunction2D h = empirical_histogram(one, 2);
    CHECK(h(0, 0) == doctest::Approx(0.25));
    CHECK(h(0, 1) == doctest::Approx(0.25));
    CHECK(h(1, 0) == doctest::Approx(0.25));
    CHECK(h(1, 1) == doctest::Approx(0.25));
    std::vector<Permutation> id = {Permutation::identity(6)};
    GridFunction2D g = empirical_histogram(id, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(g(i, j) == doctest::Approx(i == j ? 1.0 / 3 : 0.0));
    std::vector<Permutation> mixed = {Permutation::identity(3), Permutation::identity(4)};
    CHECK_THROWS_AS(empirical_histogram(mixed, 2), std::invalid_argument);
    CHECK_THROWS_AS(empirical_histogram(std::span<const Permutation>{}, 2), std::invalid_argument);
}

TEST_CASE("histogram marginals are exact when K divides n") {
    GridFunction2D h = mallows_histogram(120, 0.98, 50, 6, 5);
    for (std::size_t i = 0; i < 6; ++i) {
        double row = 0, col = 0;
        for (std::size_t j = 0; j < 6; ++j) {
            row += h(i, j);
            col += h(j, i);
        }
        CHECK(row == doctest::Approx(1.0 / 6).epsilon(1e-13));
        CHECK(col == doctest::Approx(1.0 / 6).epsilon(1e-13));
    }
}

TEST_CASE("accumulator merge equals a single pass") {
    auto draws = sample_mallows_batch(30, 0.9, 40, 2);
    HistogramAccumulator all(30, 4), a(30, 4), b(30, 4);
    for (std::size_t s = 0; s < draws.size(); ++s) {
        all.add(draws[s]);
        (s % 2 ? a : b).add(draws[s]);
    }
    a.merge(b);
    CHECK(a.samples() == 40);
    auto x = all.masses().values();
    auto y = a.masses().values();
    CHECK(std::equal(x.begin(), x.end(), y.begin(), y.end()));
    CHECK_THROWS_AS(all.add(Permutation::identity(5)), std::invalid_argument);
}
