#include "mallows/sampler.hpp"

#include "mallows/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mallows {

int truncated_geometric(int j, double log_q, double u) {
    if (j <= 1) return 0;
    int k;
    if (log_q == 0.0) {
        k = static_cast<int>(u * j);
    } else {
        // F(k) = (1 - q^{k+1}) / (1 - q^j); solve F(k) >= u for the smallest k.
        double tail = -std::expm1(j * log_q);  // 1 - q^j, same sign as -log_q
        double x = std::log1p(-u * tail) / log_q;
        k = std::isfinite(x) ? static_cast<int>(std::floor(x)) : j - 1;
    }
    return std::clamp(k, 0, j - 1);
}

Permutation sample_mallows(int n, double q, StreamRng& rng) {
    if (n < 1) throw std::invalid_argument("sample_mallows: n must be >= 1");
    if (!(q > 0.0) || !std::isfinite(q)) {
        throw std::invalid_argument("sample_mallows: q must be positive");
    }
    double log_q = q == 1.0 ? 0.0 : std::log(q);
    LehmerCode code{std::vector<int>(n)};
    for (int j = 1; j <= n; ++j) code.codes[j - 1] = truncated_geometric(j, log_q, rng.uniform());
    return to_permutation(code);
}

Permutation sample_mallows(const MallowsParams& params, QConvention convention,
                           StreamRng& rng) {
    return sample_mallows(params.n(), params.q(convention), rng);
}

std::vector<Permutation> sample_mallows_batch(int n, double q, std::size_t count,
                                              std::uint64_t seed) {
    std::vector<Permutation> out(count, Permutation::identity(n));
    parallel_reduce(
        count, 0,
        [&](std::size_t lo, std::size_t hi, int&) {
            for (std::size_t s = lo; s < hi; ++s) {
                StreamRng rng(seed, s);
                out[s] = sample_mallows(n, q, rng);
            }
        },
        [](int&, const int&) {});
    return out;
}

double ExactDistribution::probability(const Permutation& p) const {
    if (p.size() != n_) throw std::invalid_argument("probability: size mismatch");
    return entries_[lex_rank(p)].second;
}

ExactDistribution exact_distribution(int n, double q) {
    if (n < 1 || n > 10) throw std::invalid_argument("exact_distribution: need 1 <= n <= 10");
    if (!(q > 0.0)) throw std::invalid_argument("exact_distribution: q must be positive");
    ExactDistribution d;
    d.n_ = n;
    d.q_ = q;
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    double total = 0.0;
    do {
        Permutation p(img);
        double w = std::pow(q, static_cast<double>(inversions(p)));
        total += w;
        d.entries_.emplace_back(std::move(p), w);
    } while (std::next_permutation(img.begin(), img.end()));
    for (auto& e : d.entries_) e.second /= total;
    d.normalization_ = total;
    return d;
}

HistogramAccumulator::HistogramAccumulator(int n, int bins)
    : n_(n), bins_(bins), counts_(static_cast<std::size_t>(bins) * bins, 0) {
    if (n < 1) throw std::invalid_argument("histogram: n must be >= 1");
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
}

void HistogramAccumulator::add(const Permutation& p) {
    if (p.size() != n_) {
        throw std::invalid_argument("histogram: permutation of size " + std::to_string(p.size()) +
                                    " in a batch of size " + std::to_string(n_));
    }
    const std::int64_t n = n_;
    const std::int64_t k = bins_;
    for (std::int64_t i = 1; i <= n; ++i) {
        // point i/n falls in cell a with a/K < i/n <= (a+1)/K
        std::int64_t a = (i * k - 1) / n;
        std::int64_t b = (static_cast<std::int64_t>(p(static_cast<int>(i))) * k - 1) / n;
        ++counts_[a * k + b];
    }
    ++samples_;
}

void HistogramAccumulator::merge(const HistogramAccumulator& other) {
    if (other.n_ != n_ || other.bins_ != bins_) {
        throw std::invalid_argument("histogram: merge of incompatible accumulators");
    }
    for (std::size_t c = 0; c < counts_.size(); ++c) counts_[c] += other.counts_[c];
    samples_ += other.samples_;
}

GridFunction2D HistogramAccumulator::masses() const {
    if (samples_ == 0) throw std::logic_error("histogram: no samples");
    GridFunction2D g(bins_, bins_, 1.0, 1.0, GridLayout::cells);
    double denom = static_cast<double>(n_) * static_cast<double>(samples_);
    for (int a = 0; a < bins_; ++a)
        for (int b = 0; b < bins_; ++b)
            g(a, b) = static_cast<double>(counts_[static_cast<std::size_t>(a) * bins_ + b]) / denom;
    return g;
}

GridFunction2D empirical_histogram(std::span<const Permutation> samples, int bins) {
    if (samples.empty()) throw std::invalid_argument("empirical_histogram: no samples");
    HistogramAccumulator acc(samples.front().size(), bins);
    for (const auto& p : samples) acc.add(p);
    return acc.masses();
}

GridFunction2D mallows_histogram(int n, double q, std::size_t samples, int bins,
                                 std::uint64_t seed) {
    HistogramAccumulator acc = parallel_reduce(
        samples, HistogramAccumulator(n, bins),
        [&](std::size_t lo, std::size_t hi, HistogramAccumulator& part) {
            for (std::size_t s = lo; s < hi; ++s) {
                StreamRng rng(seed, s);
                part.add(sample_mallows(n, q, rng));
            }
        },
        [](HistogramAccumulator& a, const HistogramAccumulator& b) { a.merge(b); });
    return acc.masses();
}

double total_variation(std::span<const std::uint64_t> counts, const ExactDistribution& exact) {
    const auto& entries = exact.entries();
    if (counts.size() != entries.size()) throw std::invalid_argument("total_variation: size mismatch");
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    if (total == 0.0) throw std::invalid_argument("total_variation: no samples");
    double tv = 0.0;
    for (std::size_t r = 0; r < counts.size(); ++r)
        tv += std::abs(static_cast<double>(counts[r]) / total - entries[r].second);
    return 0.5 * tv;
}

}  // namespace mallows
