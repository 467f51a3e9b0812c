#include "mallows/qstats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

using namespace mallows;

namespace {

int count_inversions(const std::vector<int>& p) {
    int c = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) c += p[i] > p[j];
    return c;
}

// sum over S_n of q^inv, by enumeration
double brute_poincare(int n, double q) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    double s = 0.0;
    do s += std::pow(q, count_inversions(p));
    while (std::next_permutation(p.begin(), p.end()));
    return s;
}

struct BruteMoments {
    double mean, variance;
};

BruteMoments brute_moments(int n, double q) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    double z = 0, s1 = 0, s2 = 0;
    do {
        int d = count_inversions(p);
        double w = std::pow(q, d);
        z += w;
        s1 += w * d;
        s2 += w * d * d;
    } while (std::next_permutation(p.begin(), p.end()));
    double m = s1 / z;
    return {m, s2 / z - m * m};
}

// midpoint rule with many points, independent of the library quadrature
double midpoint_pressure(double beta) {
    const int m = 200000;
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
        double x = (k + 0.5) / m;
        s += std::log(-std::expm1(-beta * x) / (beta * x));
    }
    return s / m;
}

}  // namespace

TEST_CASE("q-integers agree with the direct geometric sum") {
    for (double q : {0.2, 0.9, 1.0, 1.3, 3.0}) {
        for (int n = 1; n <= 12; ++n) {
            double direct = 0.0;
            for (int k = 0; k < n; ++k) direct += std::pow(q, k);
            CHECK(q_integer(n, q) == doctest::Approx(direct).epsilon(1e-13));
        }
    }
    CHECK(q_integer(7, 1.0) == 7.0);
    CHECK_THROWS_AS(q_integer(0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(q_integer(3, -0.5), std::invalid_argument);
}

TEST_CASE("q-factorial is the inversion generating function") {
    for (int n = 1; n <= 7; ++n)
        for (double q : {0.3, 0.95, 1.0, 1.7})
            CHECK(log_q_factorial(n, q) == doctest::Approx(std::log(brute_poincare(n, q))).epsilon(1e-12));
}

TEST_CASE("q-factorial stays finite for large n on both sides of q = 1") {
    double lo = log_q_factorial(100000, 0.999);
    double hi = log_q_factorial(100000, 1.001);
    CHECK(std::isfinite(lo));
    CHECK(std::isfinite(hi));
    // [k]_{1/q} = q^{1-k} [k]_q, so ln[n]_{1/q}! = ln[n]_q! - C(n,2) ln q
    double q = 0.999;
    double n = 100000;
    CHECK(log_q_factorial(100000, 1.0 / q) ==
          doctest::Approx(lo - n * (n - 1) / 2 * std::log(q)).epsilon(1e-11));
}

TEST_CASE("MallowsParams conventions") {
    MallowsParams p(101, 2.0);
    CHECK(p.q_exp() == doctest::Approx(std::exp(-0.02)));
    CHECK(p.q_lin() == doctest::Approx(1.0 - 2.0 / 101));
    CHECK(MallowsParams(10, 0.0).q(QConvention::exp) == 1.0);
    CHECK_THROWS_AS(MallowsParams(5, 5.0).q(QConvention::lin), std::invalid_argument);
    CHECK_NOTHROW(MallowsParams(5, 5.0).q(QConvention::exp));
    CHECK_THROWS_AS(MallowsParams(0, 1.0), std::invalid_argument);
}

TEST_CASE("finite pressure") {
    CHECK(pressure_finite(MallowsParams(100, 0.0)).value == 0.0);
    CHECK_THROWS_AS(pressure_finite(MallowsParams(1, 1.0)), std::invalid_argument);
    PressureValue v = pressure_finite(MallowsParams(6, 1.5));
    CHECK_FALSE(v.is_limit());
    CHECK(std::get<int>(v.n) == 6);
    double q = std::exp(-1.5 / 5);
    CHECK(v.value == doctest::Approx(std::log(brute_poincare(6, q) / 720.0) / 6).epsilon(1e-12));
}

TEST_CASE("limit pressure against an independent midpoint rule") {
    CHECK(pressure_limit(0.0).value == 0.0);
    CHECK(pressure_limit(0.0).is_limit());
    for (double beta : {-20.0, -3.0, -1e-4, 1e-6, 0.5, 1.0, 4.0, 40.0})
        CHECK(pressure_limit(beta).value == doctest::Approx(midpoint_pressure(beta)).epsilon(1e-8));
}

TEST_CASE("limit pressure reflection p(-beta) = p(beta) + beta/2") {
    for (double beta : {0.01, 0.7, 2.0, 9.0, 60.0})
        CHECK(pressure_limit(-beta).value ==
              doctest::Approx(pressure_limit(beta).value + beta / 2).epsilon(1e-11));
}

TEST_CASE("limit pressure: small-beta expansion and convexity") {
    // ln((1 - e^{-z})/z) = -z/2 + z^2/24 - z^4/2880 + O(z^6)
    for (double b : {1e-2, -3e-2, 1e-5}) {
        double series = -b / 4 + b * b / 72 - b * b * b * b / 14400;
        CHECK(pressure_limit(b).value == doctest::Approx(series).epsilon(1e-11));
    }
    for (double beta : {-5.0, -1.0, 0.5, 3.0}) {
        double h = 1e-2;
        double second = pressure_limit(beta + h).value - 2 * pressure_limit(beta).value +
                        pressure_limit(beta - h).value;
        CHECK(second > 0.0);
    }
}

TEST_CASE("finite pressure converges to the limit") {
    double lim = pressure_limit(1.0).value;
    double prev = 1.0;
    for (int n : {25, 50, 100, 200, 400, 800}) {
        double gap = std::abs(pressure_finite(MallowsParams(n, 1.0)).value - lim);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("inversion moments match enumeration") {
    for (int n = 1; n <= 7; ++n)
        for (double q : {0.25, 0.9, 1.0, 1.0 + 1e-7, 2.5}) {
            InversionMoments m = inversion_moments(n, q);
            BruteMoments b = brute_moments(n, q);
            CHECK(m.mean == doctest::Approx(b.mean).epsilon(1e-10).scale(1.0));
            CHECK(m.variance == doctest::Approx(b.variance).epsilon(1e-9).scale(1.0));
        }
}

TEST_CASE("uniform inversion moments") {
    for (int n : {2, 8, 50, 1000}) {
        InversionMoments m = inversion_moments(n, 1.0);
        double nn = n;
        CHECK(m.mean == doctest::Approx(nn * (nn - 1) / 4));
        CHECK(m.variance == doctest::Approx(nn * (nn - 1) * (2 * nn + 5) / 72));
    }
    CHECK(inversion_moments(8, 1.0).variance == doctest::Approx(49.0 / 3.0).epsilon(1e-14));
    // the leading constant is 1/36
    double n = 1e5;
    CHECK(inversion_moments(100000, 1.0).variance / (n * n * n) == doctest::Approx(1.0 / 36).epsilon(1e-4));
}

TEST_CASE("mean inversion count is q d/dq ln [n]_q!") {
    for (auto [n, q] : {std::pair{20, 0.9}, {100, 0.98}, {300, 1.01}, {50, 0.5}}) {
        double h = 1e-6 * q;
        double fd = q * (log_q_factorial(n, q + h) - log_q_factorial(n, q - h)) / (2 * h);
        CHECK(inversion_moments(n, q).mean == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("inversion moments are continuous across the series branch") {
    for (double eps : {1e-3, 1e-5, 1e-9}) {
        InversionMoments a = inversion_moments(40, 1.0 - eps);
        InversionMoments b = inversion_moments(40, 1.0 + eps);
        InversionMoments c = inversion_moments(40, 1.0);
        CHECK(std::abs(a.mean - c.mean) < 1e4 * eps);
        CHECK(std::abs(b.variance - c.variance) < 1e5 * eps);
    }
    MallowsParams p(200, 3.0);
    CHECK(inversion_moments(p).mean == doctest::Approx(inversion_moments(200, p.q_lin()).mean));
    CHECK(inversion_moments(p, QConvention::exp).mean ==
          doctest::Approx(inversion_moments(200, p.q_exp()).mean));
}
