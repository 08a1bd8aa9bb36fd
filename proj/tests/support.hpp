#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "eccprove/gf2.hpp"

namespace testing {

inline eccprove::BitVec random_bits(std::mt19937_64& rng, std::size_t n) {
    eccprove::BitVec v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, rng() & 1u);
    return v;
}

inline eccprove::BitMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::vector<eccprove::BitVec> r;
    for (std::size_t i = 0; i < rows; ++i) r.push_back(random_bits(rng, cols));
    return eccprove::BitMatrix::from_rows(std::move(r), cols);
}

// Popcount-based inner product, independent of BitVec::dot.
inline bool naive_dot(const eccprove::BitVec& a, const eccprove::BitVec& b) {
    bool s = false;
    for (std::size_t i = 0; i < a.size(); ++i) s ^= a.get(i) && b.get(i);
    return s;
}

inline eccprove::BitVec naive_mul(const eccprove::BitMatrix& m, const eccprove::BitVec& v) {
    eccprove::BitVec out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        bool s = false;
        for (std::size_t c = 0; c < m.cols(); ++c) s ^= m.get(r, c) && v.get(c);
        out.set(r, s);
    }
    return out;
}

// Size of the row space by enumerating every row combination; rank = log2 of it.
inline std::size_t brute_rank(const eccprove::BitMatrix& m) {
    std::vector<std::uint64_t> span{0};
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::uint64_t row = 0;
        for (std::size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) row |= std::uint64_t{1} << c;
        bool inside = false;
        for (auto s : span) inside |= s == row;
        if (inside) continue;
        const std::size_t sz = span.size();
        for (std::size_t i = 0; i < sz; ++i) span.push_back(span[i] ^ row);
    }
    std::size_t k = 0;
    while ((std::size_t{1} << k) < span.size()) ++k;
    return k;
}

// Minimum weight of a nonzero vector x with H x = 0, by enumerating all 2^n words.
inline std::size_t brute_min_distance(const eccprove::BitMatrix& h) {
    const std::size_t n = h.cols();
    std::size_t best = n + 1;
    for (std::uint64_t x = 1; x < (std::uint64_t{1} << n); ++x) {
        const auto v = eccprove::BitVec::from_uint(n, x);
        if (naive_mul(h, v).is_zero()) best = std::min<std::size_t>(best, v.weight());
    }
    return best;
}

}  // namespace testing
