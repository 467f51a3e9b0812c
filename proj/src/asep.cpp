#include "mallows/asep.hpp"

#include "mallows/limits.hpp"
#include "mallows/parallel.hpp"
#include "mallows/rng.hpp"
#include "mallows/sampler.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace mallows {

ParticleConfig::ParticleConfig(std::vector<std::uint8_t> occupation)
    : occupation_(std::move(occupation)), k_(0) {
    for (auto v : occupation_) {
        if (v > 1) throw std::invalid_argument("occupation values must be 0 or 1");
        k_ += v;
    }
}

AsepParams::AsepParams(int sites, int particles, double beta)
    : sites_(sites), particles_(particles), beta_(beta) {
    if (sites < 1) throw std::invalid_argument("asep: need at least one site");
    if (particles < 0 || particles > sites) throw std::invalid_argument("asep: k must be in [0, N]");
    p_left_ = 0.5 + beta / (4.0 * sites);
    if (!(p_left_ > 0.0 && p_left_ < 1.0)) {
        throw std::invalid_argument("asep: |beta| must be below 2N so that 0 < p_left < 1");
    }
}

ParticleConfig pushforward(const Permutation& pi, int k) {
    const int n = pi.size();
    if (k < 0 || k > n) throw std::invalid_argument("pushforward: k out of range");
    std::vector<std::uint8_t> eta(n);
    for (int i = 1; i <= n; ++i) eta[i - 1] = pi(i) <= k ? 1 : 0;
    return ParticleConfig(std::move(eta));
}

namespace {

std::vector<double> rho_column(const AsepParams& params) {
    const int n = params.sites();
    std::vector<double> rho(n);
    double y = static_cast<double>(params.particles()) / n;
    for (int i = 1; i <= n; ++i) rho[i - 1] = blocking_profile(static_cast<double>(i) / n, y, params.beta());
    return rho;
}

}  // namespace

AsepProfile profile_monte_carlo(const AsepParams& params, std::size_t samples, std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("profile_monte_carlo: need at least 2 samples");
    const int n = params.sites();
    const int k = params.particles();
    const double q = params.q();
    using Counts = std::vector<std::uint64_t>;
    Counts counts = parallel_reduce(
        samples, Counts(n, 0),
        [&](std::size_t lo, std::size_t hi, Counts& part) {
            for (std::size_t s = lo; s < hi; ++s) {
                StreamRng rng(seed, s);
                Permutation pi = sample_mallows(n, q, rng);
                for (int i = 1; i <= n; ++i)
                    if (pi(i) <= k) ++part[i - 1];
            }
        },
        [](Counts& a, const Counts& b) {
            for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        });
    AsepProfile out;
    out.frequency.resize(n);
    out.stderr_.resize(n);
    const double m = static_cast<double>(samples);
    for (int i = 0; i < n; ++i) {
        double p = static_cast<double>(counts[i]) / m;
        out.frequency[i] = p;
        out.stderr_[i] = std::sqrt(p * (1.0 - p) / (m - 1.0));
    }
    out.rho_limit = rho_column(params);
    return out;
}

DynamicsSummary simulate_dynamics(const AsepParams& params, double t_end, std::uint64_t seed,
                                  const DynamicsOptions& options) {
    if (!(t_end > 0.0)) throw std::invalid_argument("simulate_dynamics: t_end must be positive");
    const int n = params.sites();
    const int k = params.particles();
    const double burn = options.burn_in < 0.0 ? 0.5 * t_end : options.burn_in;
    if (burn >= t_end) throw std::invalid_argument("simulate_dynamics: burn-in must be before t_end");
    const int batches = std::max(2, options.batches);
    const double rate_left = params.p_left();
    const double rate_right = 1.0 - params.p_left();

    std::vector<std::uint8_t> eta(n, 0);
    for (int i = 0; i < k; ++i) eta[i] = 1;

    StreamRng rng(seed, 0);
    struct Event {
        double time;
        int bond;  // bond b joins sites b and b+1 (0-based)
        std::uint64_t version;
        bool operator>(const Event& o) const { return time > o.time; }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;
    std::vector<std::uint64_t> version(std::max(0, n - 1), 0);

    auto bond_rate = [&](int b) {
        if (eta[b] == 1 && eta[b + 1] == 0) return rate_right;
        if (eta[b] == 0 && eta[b + 1] == 1) return rate_left;
        return 0.0;
    };
    auto schedule = [&](int b, double now) {
        ++version[b];
        double r = bond_rate(b);
        if (r > 0.0) queue.push({now - std::log(rng.uniform()) / r, b, version[b]});
    };
    for (int b = 0; b + 1 < n; ++b) schedule(b, 0.0);

    // time-integrated occupation per batch
    const double span = t_end - burn;
    std::vector<std::vector<double>> batch_integral(batches, std::vector<double>(n, 0.0));
    std::vector<double> last(n, burn);  // start of the current constant stretch, clipped to burn
    const bool track_states = n <= 16;
    std::vector<double> state_time(track_states ? (std::size_t{1} << n) : 0, 0.0);
    auto state_index = [&]() {
        std::size_t s = 0;
        for (int i = 0; i < n; ++i)
            if (eta[i]) s |= std::size_t{1} << i;
        return s;
    };
    double last_state_change = burn;

    int batch = 0;
    double batch_end = burn + span / batches;
    auto flush_site = [&](int i, double until) {
        if (until > last[i]) {
            if (eta[i]) batch_integral[batch][i] += until - last[i];
            last[i] = until;
        }
    };
    auto advance_batches = [&](double now) {
        while (batch < batches && now >= batch_end) {
            for (int i = 0; i < n; ++i) flush_site(i, batch_end);
            ++batch;
            batch_end = burn + span * (batch + 1) / batches;
        }
    };

    DynamicsSummary out{AsepProfile{}, ParticleConfig(eta), 0, {}};
    while (!queue.empty()) {
        Event ev = queue.top();
        if (ev.time >= t_end) break;
        queue.pop();
        if (ev.version != version[ev.bond]) continue;
        const double now = ev.time;
        advance_batches(now);
        const int b = ev.bond;
        if (now > burn) {
            flush_site(b, now);
            flush_site(b + 1, now);
            if (track_states) {
                state_time[state_index()] += now - std::max(last_state_change, burn);
                last_state_change = now;
            }
        }
        std::swap(eta[b], eta[b + 1]);
        ++out.events;
        for (int c = std::max(0, b - 1); c <= std::min(n - 2, b + 1); ++c) schedule(c, now);
    }
    advance_batches(t_end);
    if (track_states) state_time[state_index()] += t_end - std::max(last_state_change, burn);

    int conserved = std::accumulate(eta.begin(), eta.end(), 0);
    if (conserved != k) throw std::logic_error("simulate_dynamics: particle number changed");

    const double batch_len = span / batches;
    out.profile.frequency.assign(n, 0.0);
    out.profile.stderr_.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0, sum2 = 0.0;
        for (int bidx = 0; bidx < batches; ++bidx) {
            double mean = batch_integral[bidx][i] / batch_len;
            sum += mean;
            sum2 += mean * mean;
        }
        double mean = sum / batches;
        double var = std::max(0.0, (sum2 - batches * mean * mean) / (batches - 1));
        out.profile.frequency[i] = mean;
        out.profile.stderr_[i] = std::sqrt(var / batches);
    }
    out.profile.rho_limit = rho_column(params);
    out.final_config = ParticleConfig(eta);
    if (track_states) {
        for (double& v : state_time) v /= span;
        out.occupation_time = std::move(state_time);
    }
    return out;
}

}  // namespace mallows
