#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "slt/rng.hpp"

namespace slt {

// Packed bit mask over the flattened weight vector. Bit i corresponds to
// weight i of the owning network's index convention.
class Genotype {
public:
    Genotype() = default;

    explicit Genotype(std::size_t n, bool fill = false) : n_(n), words_((n + 63) / 64, 0) {
        if (fill) {
            for (auto& w : words_) w = ~0ULL;
            mask_tail();
        }
    }

    // i.i.d. fair bits.
    static Genotype random(std::size_t n, Rng& rng) {
        Genotype g(n);
        for (auto& w : g.words_) w = rng.next_u64();
        g.mask_tail();
        return g;
    }

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }

    void set(std::size_t i, bool v) {
        const std::uint64_t bit = 1ULL << (i & 63);
        if (v)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }

    void flip(std::size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // Per-bit coin flip between the two parents.
    static Genotype uniform_crossover(const Genotype& a, const Genotype& b, Rng& rng) {
        if (a.n_ != b.n_) throw std::invalid_argument("crossover: genotype length mismatch");
        Genotype child(a.n_);
        for (std::size_t w = 0; w < child.words_.size(); ++w) {
            const std::uint64_t m = rng.next_u64();
            child.words_[w] = (a.words_[w] & m) | (b.words_[w] & ~m);
        }
        child.mask_tail();
        return child;
    }

    // Ablation variant: one cut point, prefix from a, suffix from b.
    static Genotype single_point_crossover(const Genotype& a, const Genotype& b, Rng& rng) {
        if (a.n_ != b.n_) throw std::invalid_argument("crossover: genotype length mismatch");
        const std::size_t cut = static_cast<std::size_t>(rng.below(a.n_ + 1));
        Genotype child(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) child.set(i, i < cut ? a.get(i) : b.get(i));
        return child;
    }

    // Copy with exactly one uniformly chosen bit flipped.
    Genotype mutated(Rng& rng) const {
        if (n_ == 0) throw std::invalid_argument("mutate: empty genotype");
        Genotype g(*this);
        g.flip(static_cast<std::size_t>(rng.below(n_)));
        return g;
    }

    bool operator==(const Genotype& o) const { return n_ == o.n_ && words_ == o.words_; }

    std::uint64_t hash() const {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ n_;
        for (auto w : words_) {
            h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    // Hex serialization (low word first) for compact on-disk mask storage.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        s.reserve(words_.size() * 16);
        for (auto w : words_)
            for (int nib = 0; nib < 16; ++nib) s.push_back(digits[(w >> (4 * nib)) & 0xF]);
        return s;
    }

    static Genotype from_hex(std::size_t n, const std::string& hex) {
        Genotype g(n);
        if (hex.size() != g.words_.size() * 16)
            throw std::invalid_argument("genotype hex length mismatch");
        for (std::size_t w = 0; w < g.words_.size(); ++w) {
            std::uint64_t v = 0;
            for (int nib = 15; nib >= 0; --nib) {
                const char c = hex[w * 16 + static_cast<std::size_t>(nib)];
                const std::uint64_t d =
                    c >= '0' && c <= '9' ? static_cast<std::uint64_t>(c - '0')
                    : c >= 'a' && c <= 'f' ? static_cast<std::uint64_t>(c - 'a' + 10)
                                           : throw std::invalid_argument("bad hex digit");
                v = (v << 4) | d;
            }
            g.words_[w] = v;
        }
        g.mask_tail();
        return g;
    }

private:
    void mask_tail() {
        const std::size_t rem = n_ & 63;
        if (rem != 0 && !words_.empty()) words_.back() &= (1ULL << rem) - 1;
    }

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Fraction of pruned weights, 1 - popcount/n.
inline double sparsity(const Genotype& mask) {
    if (mask.empty()) throw std::invalid_argument("sparsity: empty mask");
    return 1.0 - static_cast<double>(mask.popcount()) / static_cast<double>(mask.size());
}

inline std::size_t hamming_distance(const Genotype& a, const Genotype& b) {
    std::size_t d = 0;
    for (std::size_t w = 0; w < a.words().size(); ++w)
        d += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
    return d;
}

} // namespace slt
