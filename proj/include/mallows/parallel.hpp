#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mallows {

// Worker count: MLL_THREADS if set and positive, else hardware concurrency.
inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MLL_THREADS")) {
        try {
            long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
        } catch (...) {
        }
    }
    return hw;
}

// Runs body(begin, end, partial) on contiguous chunks of [0, count) and folds
// the partials left to right in chunk order. With an associative, commutative
// combine the result does not depend on the worker count.
template <class Partial, class Body, class Combine>
Partial parallel_reduce(std::size_t count, Partial init, Body body, Combine combine) {
    unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, count)));
    std::vector<Partial> partials(workers, init);
    if (workers == 1) {
        body(std::size_t{0}, count, partials[0]);
        return partials[0];
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = count * w / workers;
        std::size_t hi = count * (w + 1) / workers;
        pool.emplace_back([&, lo, hi, w] { body(lo, hi, partials[w]); });
    }
    pool.clear();
    Partial out = partials[0];
    for (unsigned w = 1; w < workers; ++w) combine(out, partials[w]);
    return out;
}

}  // namespace mallows
