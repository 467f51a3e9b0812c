#pragma once

#include "mallows/grid.hpp"
#include "mallows/permutation.hpp"
#include "mallows/qstats.hpp"
#include "mallows/rng.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mallows {

// Inverse-CDF draw of Z on {0..j-1} with P(Z = k) proportional to q^k,
// given u uniform on (0,1). `log_q` is ln q.
int truncated_geometric(int j, double log_q, double u);

// Exact Mallows draw: independent truncated geometrics as a Lehmer code,
// decoded in O(n log n).
Permutation sample_mallows(int n, double q, StreamRng& rng);
Permutation sample_mallows(const MallowsParams& params, QConvention convention,
                           StreamRng& rng);

// `count` independent draws; draw s uses stream (seed, s), so the batch is the
// same for any thread count.
std::vector<Permutation> sample_mallows_batch(int n, double q, std::size_t count,
                                              std::uint64_t seed);

// q^{inv(pi)} / [n]_q! for every pi in S_n, in lexicographic order (so the
// entry at index lex_rank(pi) belongs to pi).
class ExactDistribution {
public:
    int n() const { return n_; }
    double q() const { return q_; }
    // Sum of the unnormalized weights q^{inv}.
    double normalization() const { return normalization_; }
    const std::vector<std::pair<Permutation, double>>& entries() const { return entries_; }
    double probability(const Permutation& p) const;

private:
    friend ExactDistribution exact_distribution(int n, double q);
    int n_ = 0;
    double q_ = 1.0;
    double normalization_ = 0.0;
    std::vector<std::pair<Permutation, double>> entries_;
};

// Enumerates S_n; rejects n > 10.
ExactDistribution exact_distribution(int n, double q);

// Cell-mass accumulator for the empirical measure (1/n) sum_i delta_{(i/n, pi_i/n)}
// on a K x K partition of (0,1]^2 into half-open cells ((a-1)/K, a/K].
// Counts are integers, so merging partial accumulators is exact and
// order independent.
class HistogramAccumulator {
public:
    HistogramAccumulator(int n, int bins);

    void add(const Permutation& p);
    void merge(const HistogramAccumulator& other);

    int n() const { return n_; }
    int bins() const { return bins_; }
    std::uint64_t samples() const { return samples_; }
    // Average cell masses as a K x K cell grid on [0,1]^2 (values are masses,
    // they sum to 1).
    GridFunction2D masses() const;

private:
    int n_;
    int bins_;
    std::uint64_t samples_ = 0;
    std::vector<std::uint64_t> counts_;
};

// Rejects an empty batch or mixed n.
GridFunction2D empirical_histogram(std::span<const Permutation> samples, int bins);

// Draws and bins in one pass without storing permutations.
GridFunction2D mallows_histogram(int n, double q, std::size_t samples, int bins,
                                 std::uint64_t seed);

// Total-variation distance between observed lex-rank counts and an exact law.
double total_variation(std::span<const std::uint64_t> counts, const ExactDistribution& exact);

}  // namespace mallows
