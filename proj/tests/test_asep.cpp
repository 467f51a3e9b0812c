#include "mallows/asep.hpp"
#include "mallows/limits.hpp"
#include "mallows/sampler.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

using namespace mallows;

namespace {

int config_index(const std::vector<std::uint8_t>& eta) {
    int idx = 0;
    for (std::size_t i = 0; i < eta.size(); ++i) idx |= eta[i] << i;
    return idx;
}

// Stationary law of the ASEP generator on {0,1}^N with k particles, by power
// iteration of the uniformized chain (independent of the sampler).
std::map<int, double> generator_stationary(int n, int k, double p_left) {
    std::vector<int> states;
    for (int s = 0; s < (1 << n); ++s)
        if (__builtin_popcount(static_cast<unsigned>(s)) == k) states.push_back(s);
    std::map<int, std::size_t> pos;
    for (std::size_t a = 0; a < states.size(); ++a) pos[states[a]] = a;
    std::vector<double> pi(states.size(), 1.0 / states.size());
    const double lambda = n;  // bound on the total exit rate
    for (int it = 0; it < 20000; ++it) {
        std::vector<double> next(states.size(), 0.0);
        for (std::size_t a = 0; a < states.size(); ++a) {
            int s = states[a];
            double out = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                int here = (s >> i) & 1, there = (s >> (i + 1)) & 1;
                if (here == there) continue;
                int t = s ^ (1 << i) ^ (1 << (i + 1));
                // particle at i+1 hopping left, or particle at i hopping right
                double rate = there ? p_left : 1.0 - p_left;
                next[pos[t]] += pi[a] * rate / lambda;
                out += rate;
            }
            next[a] += pi[a] * (1.0 - out / lambda);
        }
        pi = next;
    }
    std::map<int, double> law;
    for (std::size_t a = 0; a < states.size(); ++a) law[states[a]] = pi[a];
    return law;
}

}  // namespace

TEST_CASE("push-forward places particles at the small values") {
    ParticleConfig eta = pushforward(Permutation({3, 1, 4, 2}), 2);
    CHECK(eta.occupation() == std::vector<std::uint8_t>{0, 1, 0, 1});
    CHECK(eta.particles() == 2);
    CHECK(eta(2) == 1);
    CHECK(pushforward(Permutation::identity(5), 0).particles() == 0);
    CHECK(pushforward(Permutation::identity(5), 5).particles() == 5);
    CHECK_THROWS_AS(pushforward(Permutation::identity(3), 4), std::invalid_argument);
    CHECK_THROWS_AS(ParticleConfig({0, 2, 1}), std::invalid_argument);
}

TEST_CASE("asymmetry parameters") {
    AsepParams p(40, 20, 4.0);
    CHECK(p.p_left() == doctest::Approx(0.525));
    CHECK(p.q() == doctest::Approx(0.475 / 0.525));
    CHECK(AsepParams(10, 3, 0.0).q() == 1.0);
    CHECK_THROWS_AS(AsepParams(10, 11, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AsepParams(10, 5, 20.0), std::invalid_argument);
    CHECK_THROWS_AS(AsepParams(0, 0, 1.0), std::invalid_argument);
}

TEST_CASE("push-forward of the exact Mallows law is the generator's stationary law") {
    const int n = 5, k = 2;
    AsepParams params(n, k, 6.0);
    auto reference = generator_stationary(n, k, params.p_left());
    std::map<int, double> pushed;
    ExactDistribution exact = exact_distribution(n, params.q());
    for (const auto& [p, w] : exact.entries())
        pushed[config_index(pushforward(p, k).occupation())] += w;
    REQUIRE(pushed.size() == reference.size());
    for (const auto& [s, w] : reference) CHECK(pushed[s] == doctest::Approx(w).epsilon(1e-9));
}

TEST_CASE("two-site chain: detailed balance in the occupation times") {
    AsepParams params(2, 1, 1.6);  // p_left = 0.7
    DynamicsSummary d = simulate_dynamics(params, 2e5, 17);
    // state (1,0) has index 1, (0,1) index 2; pi(1,0) = p_left
    REQUIRE(d.occupation_time.size() == 4);
    CHECK(d.occupation_time[1] == doctest::Approx(0.7).epsilon(0.01));
    CHECK(d.occupation_time[2] == doctest::Approx(0.3).epsilon(0.02));
    CHECK(d.profile.frequency[0] == doctest::Approx(d.occupation_time[1]));
}

TEST_CASE("dynamics occupation times match the stationary law") {
    const int n = 5, k = 2;
    AsepParams params(n, k, 6.0);
    auto reference = generator_stationary(n, k, params.p_left());
    DynamicsSummary d = simulate_dynamics(params, 2e5, 5);
    for (const auto& [s, w] : reference) CHECK(std::abs(d.occupation_time[s] - w) < 0.01);
    CHECK(d.final_config.particles() == k);
    CHECK(d.events > 50000);
}

TEST_CASE("Monte Carlo profile: conservation, reproducibility and the limit profile") {
    AsepParams params(30, 12, 3.0);
    AsepProfile a = profile_monte_carlo(params, 4000, 1);
    AsepProfile b = profile_monte_carlo(params, 4000, 1);
    CHECK(a.frequency == b.frequency);
    double total = std::accumulate(a.frequency.begin(), a.frequency.end(), 0.0);
    CHECK(total == doctest::Approx(12.0).epsilon(1e-12));
    for (int i = 1; i <= 30; ++i) {
        CHECK(a.rho_limit[i - 1] == blocking_profile(i / 30.0, 12 / 30.0, 3.0));
        double f = a.frequency[i - 1];
        CHECK(a.stderr_[i - 1] == doctest::Approx(std::sqrt(f * (1 - f) / 3999)).epsilon(1e-9));
    }
    // beta > 0: more particles on the left
    CHECK(a.frequency.front() > a.frequency.back());
}

TEST_CASE("symmetric dynamics give a flat profile") {
    AsepParams params(12, 4, 0.0);
    DynamicsSummary d = simulate_dynamics(params, 4e4, 3);
    for (int i = 0; i < 12; ++i) {
        CHECK(d.profile.rho_limit[i] == doctest::Approx(4.0 / 12));
        CHECK(std::abs(d.profile.frequency[i] - 4.0 / 12) < 5 * d.profile.stderr_[i] + 0.01);
    }
    CHECK_THROWS_AS(simulate_dynamics(params, 0.0, 1), std::invalid_argument);
    DynamicsOptions late;
    late.burn_in = 10.0;
    CHECK_THROWS_AS(simulate_dynamics(params, 5.0, 1, late), std::invalid_argument);
}

TEST_CASE("dynamics are reproducible from the seed") {
    AsepParams params(20, 10, 2.0);
    DynamicsSummary a = simulate_dynamics(params, 500.0, 8);
    DynamicsSummary b = simulate_dynamics(params, 500.0, 8);
    CHECK(a.profile.frequency == b.profile.frequency);
    CHECK(a.final_config == b.final_config);
    CHECK(a.occupation_time.empty());
}
