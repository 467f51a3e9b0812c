#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mallows {

// A bijection of {1..n} in one-line notation (image[i-1] = pi_i).
class Permutation {
public:
    // Throws std::invalid_argument unless `image` is a permutation of 1..n.
    explicit Permutation(std::vector<int> image);

    static Permutation identity(int n);
    static Permutation reversal(int n);

    int size() const { return static_cast<int>(image_.size()); }
    // 1-based position, 1-based value.
    int operator()(int position) const { return image_[position - 1]; }
    std::span<const int> image() const { return image_; }

    // (n+1-pi_1, ..., n+1-pi_n)
    Permutation complement() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    struct Unchecked {};
    Permutation(std::vector<int> image, Unchecked) : image_(std::move(image)) {}
    friend Permutation decode_unchecked(std::vector<int>);

    std::vector<int> image_;
};

// codes[j-1] = #{i < j : pi_i > pi_j}, so codes[j-1] lies in {0..j-1} and the
// codes sum to the inversion count.
struct LehmerCode {
    std::vector<int> codes;
};

// Inversion count in O(n log n) (merge sort counting).
std::int64_t inversions(const Permutation& p);
// O(n^2) pair count, kept as a reference for tests.
std::int64_t inversions_naive(const Permutation& p);

LehmerCode to_lehmer(const Permutation& p);
// Throws std::invalid_argument if some code is out of range.
Permutation to_permutation(const LehmerCode& code);

// Lexicographic rank in [0, n!), for n <= 20.
std::uint64_t lex_rank(const Permutation& p);

}  // namespace mallows
