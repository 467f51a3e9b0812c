#pragma once

#include "mallows/permutation.hpp"

#include <cstdint>
#include <vector>

namespace mallows {

// Occupation vector eta in {0,1}^N with particle count k.
class ParticleConfig {
public:
    explicit ParticleConfig(std::vector<std::uint8_t> occupation);

    int sites() const { return static_cast<int>(occupation_.size()); }
    int particles() const { return k_; }
    // 1-based site index
    int operator()(int site) const { return occupation_[site - 1]; }
    const std::vector<std::uint8_t>& occupation() const { return occupation_; }

    friend bool operator==(const ParticleConfig&, const ParticleConfig&) = default;

private:
    std::vector<std::uint8_t> occupation_;
    int k_;
};

// Weakly asymmetric exclusion on {1..N}: left hops at rate p_left =
// 1/2 + beta/(4N), right hops at 1 - p_left, q = (1 - p_left)/p_left.
// For beta > 0 particles pile up on the left, matching the decrease of
// rho(x;y) in x.
class AsepParams {
public:
    AsepParams(int sites, int particles, double beta);

    int sites() const { return sites_; }
    int particles() const { return particles_; }
    double beta() const { return beta_; }
    double p_left() const { return p_left_; }
    double q() const { return (1.0 - p_left_) / p_left_; }

private:
    int sites_;
    int particles_;
    double beta_;
    double p_left_;
};

// eta_i = 1 iff pi_i <= k: the permutation applied to (1^k, 0^{N-k}).
// Under Mallows(q) this is the stationary ASEP law with k particles; low
// values (particles) sit left for q < 1.
ParticleConfig pushforward(const Permutation& pi, int k);

struct AsepProfile {
    std::vector<double> frequency;  // per site, 1-based site i at index i-1
    std::vector<double> stderr_;
    std::vector<double> rho_limit;  // rho(i/N; k/N; beta)
};

// Site occupation frequencies of push-forwards of `samples` exact Mallows(q)
// draws (draw s on stream (seed, s)).
AsepProfile profile_monte_carlo(const AsepParams& params, std::size_t samples, std::uint64_t seed);

struct DynamicsSummary {
    AsepProfile profile;  // time averages over [burn_in, t_end]; stderr from batch means
    ParticleConfig final_config;
    std::uint64_t events = 0;
    // fraction of averaging time spent in each configuration, only for N <= 16
    // (index = sum eta_i 2^{i-1})
    std::vector<double> occupation_time;
};

struct DynamicsOptions {
    double burn_in = -1.0;  // negative: t_end / 2
    int batches = 20;
};

// Continuous-time ASEP from the packed start (1^k 0^{N-k}), simulated exactly
// with one exponential clock per bond in an event queue (stale clocks are
// skipped by version stamp).
DynamicsSummary simulate_dynamics(const AsepParams& params, double t_end, std::uint64_t seed,
                                  const DynamicsOptions& options = {});

}  // namespace mallows
