#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eccprove {

/// Packed bit vector over GF(2). Bit 0 is the first/least-significant bit.
/// Storage beyond len() is always zero.
class BitVec {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitVec() = default;
    explicit BitVec(std::size_t len);

    /// Low `len` bits of `value`.
    static BitVec from_uint(std::size_t len, std::uint64_t value);
    /// Index-0-first string of '0'/'1'.
    static BitVec from_string(std::string_view bits);
    static BitVec unit(std::size_t len, std::size_t index);

    std::size_t size() const noexcept { return len_; }
    bool empty() const noexcept { return len_ == 0; }

    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
    void set(std::size_t i, bool v = true);
    void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }
    bool operator[](std::size_t i) const { return get(i); }

    std::size_t weight() const noexcept;
    bool is_zero() const noexcept;
    /// Parity of the AND of two equal-length vectors (GF(2) dot product).
    bool dot(const BitVec& other) const;

    BitVec& operator^=(const BitVec& other);
    BitVec& operator&=(const BitVec& other);
    friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec& b) { return a &= b; }
    bool operator==(const BitVec& other) const = default;

    /// Low 64 bits as an integer (bit i -> 2^i).
    std::uint64_t to_uint() const;
    std::string to_string() const;
    /// Hex, most significant nibble first.
    std::string to_hex() const;

    BitVec slice(std::size_t lo, std::size_t count) const;

    const std::vector<Word>& words() const noexcept { return words_; }

private:
    std::size_t len_ = 0;
    std::vector<Word> words_;
};

std::ostream& operator<<(std::ostream& os, const BitVec& v);

/// Dense row-major GF(2) matrix; each row is a BitVec of length cols().
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols);

    static BitMatrix identity(std::size_t n);
    /// Rows given as index-0-first bit strings.
    static BitMatrix from_rows(const std::vector<std::string>& rows);
    static BitMatrix from_rows(std::vector<BitVec> rows, std::size_t cols);

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
    const BitVec& row(std::size_t r) const { return rows_[r]; }
    BitVec& row(std::size_t r) { return rows_[r]; }
    BitVec column(std::size_t c) const;

    BitMatrix transpose() const;
    bool is_zero() const;
    bool operator==(const BitMatrix& other) const = default;

    std::vector<std::string> row_strings() const;

    /// Plain-text form: "rows cols" then one 0/1 string per row.
    std::string serialize() const;
    static BitMatrix parse(std::string_view text);

private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
};

BitVec mat_vec_mul(const BitMatrix& m, const BitVec& v);
BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);
std::size_t rank(const BitMatrix& m);

/// Result of bringing H into [P | I_r] form.
/// `matrix` column j equals the row-reduced H column `permutation[j]`.
struct SystematicForm {
    BitMatrix matrix;
    std::vector<std::size_t> permutation;
    /// Columns of H holding the identity part (pivot columns), in row order.
    std::vector<std::size_t> pivot_columns;
    /// Remaining columns of H in increasing order.
    std::vector<std::size_t> free_columns;
    /// Row-reduced H in the original column order.
    BitMatrix reduced;
};

/// If the last r columns of H are unit vectors they are kept as the pivots
/// (H is already systematic up to a check-column permutation). Otherwise
/// Gauss-Jordan elimination pivots on the lowest available column.
/// Throws InvalidInput when H is rank deficient.
SystematicForm systematic_form(const BitMatrix& h);

/// k x n generator with G * H^T = 0. Row i has its unit in
/// systematic_form(h).free_columns[i].
BitMatrix generator_from_parity_check(const BitMatrix& h);

/// Keep a maximal linearly independent subset of rows, first-come order.
BitMatrix independent_rows(const BitMatrix& m);

}  // namespace eccprove
