#include "mallows/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mallows {

namespace {

// Fenwick tree over {1..n} holding 0/1 presence flags.
class Fenwick {
public:
    explicit Fenwick(int n) : n_(n), tree_(n + 1, 0) {}

    void fill_ones() {
        for (int i = 1; i <= n_; ++i) {
            tree_[i] += 1;
            int parent = i + (i & -i);
            if (parent <= n_) tree_[parent] += tree_[i];
        }
    }
    void add(int i, int delta) {
        for (; i <= n_; i += i & -i) tree_[i] += delta;
    }
    int prefix(int i) const {
        int s = 0;
        for (; i > 0; i -= i & -i) s += tree_[i];
        return s;
    }
    // Smallest i with prefix(i) >= k (k-th present element, 1-based).
    int select(int k) const {
        int pos = 0;
        int step = 1;
        while (step * 2 <= n_) step *= 2;
        for (; step > 0; step /= 2) {
            if (pos + step <= n_ && tree_[pos + step] < k) {
                pos += step;
                k -= tree_[pos];
            }
        }
        return pos + 1;
    }

private:
    int n_;
    std::vector<int> tree_;
};

std::int64_t merge_count(std::vector<int>& a, std::vector<int>& buf, std::size_t lo,
                         std::size_t hi) {
    if (hi - lo < 2) return 0;
    std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t count = merge_count(a, buf, lo, mid) + merge_count(a, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (a[j] < a[i]) {
            count += static_cast<std::int64_t>(mid - i);
            buf[k++] = a[j++];
        } else {
            buf[k++] = a[i++];
        }
    }
    while (i < mid) buf[k++] = a[i++];
    while (j < hi) buf[k++] = a[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, a.begin() + lo);
    return count;
}

}  // namespace

Permutation decode_unchecked(std::vector<int> image) {
    return Permutation(std::move(image), Permutation::Unchecked{});
}

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    const int n = size();
    std::vector<char> seen(n + 1, 0);
    for (int v : image_) {
        if (v < 1 || v > n || seen[v]) {
            throw std::invalid_argument("not a permutation of 1.." + std::to_string(n));
        }
        seen[v] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> img(n);
    std::iota(img.begin(), img.end(), 1);
    return Permutation(std::move(img), Unchecked{});
}

Permutation Permutation::reversal(int n) {
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) img[i] = n - i;
    return Permutation(std::move(img), Unchecked{});
}

Permutation Permutation::complement() const {
    const int n = size();
    std::vector<int> img(image_);
    for (int& v : img) v = n + 1 - v;
    return Permutation(std::move(img), Unchecked{});
}

std::int64_t inversions(const Permutation& p) {
    std::vector<int> a(p.image().begin(), p.image().end());
    std::vector<int> buf(a.size());
    return merge_count(a, buf, 0, a.size());
}

std::int64_t inversions_naive(const Permutation& p) {
    auto img = p.image();
    std::int64_t count = 0;
    for (std::size_t i = 0; i < img.size(); ++i)
        for (std::size_t j = i + 1; j < img.size(); ++j)
            if (img[i] > img[j]) ++count;
    return count;
}

LehmerCode to_lehmer(const Permutation& p) {
    const int n = p.size();
    Fenwick seen(n);
    LehmerCode code{std::vector<int>(n)};
    for (int j = 1; j <= n; ++j) {
        int v = p(j);
        code.codes[j - 1] = (j - 1) - seen.prefix(v);
        seen.add(v, 1);
    }
    return code;
}

Permutation to_permutation(const LehmerCode& code) {
    const int n = static_cast<int>(code.codes.size());
    for (int j = 1; j <= n; ++j) {
        int c = code.codes[j - 1];
        if (c < 0 || c > j - 1) {
            throw std::invalid_argument("Lehmer code entry " + std::to_string(j) +
                                        " out of range");
        }
    }
    // pi_j is the (j - c_j)-th smallest of {pi_1..pi_j}; peel positions from the right.
    Fenwick remaining(n);
    remaining.fill_ones();
    std::vector<int> img(n);
    for (int j = n; j >= 1; --j) {
        int v = remaining.select(j - code.codes[j - 1]);
        img[j - 1] = v;
        remaining.add(v, -1);
    }
    return decode_unchecked(std::move(img));
}

std::uint64_t lex_rank(const Permutation& p) {
    const int n = p.size();
    if (n > 20) throw std::invalid_argument("lex_rank: n > 20 overflows 64 bits");
    Fenwick remaining(n);
    remaining.fill_ones();
    std::uint64_t rank = 0;
    for (int i = 1; i <= n; ++i) {
        int v = p(i);
        rank = rank * static_cast<std::uint64_t>(n - i + 1) +
               static_cast<std::uint64_t>(remaining.prefix(v - 1));
        remaining.add(v, -1);
    }
    return rank;
}

}  // namespace mallows
