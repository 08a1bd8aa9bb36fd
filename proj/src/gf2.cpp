#include "eccprove/gf2.hpp"

#include <bit>
#include <ostream>
#include <sstream>

#include "eccprove/error.hpp"

namespace eccprove {

namespace {

std::size_t word_count(std::size_t len) { return (len + BitVec::kWordBits - 1) / BitVec::kWordBits; }

void require_same_len(const BitVec& a, const BitVec& b, const char* op) {
    if (a.size() != b.size())
        throw InvalidInput(std::string(op) + ": length mismatch " + std::to_string(a.size()) + " vs " +
                           std::to_string(b.size()));
}

}  // namespace

BitVec::BitVec(std::size_t len) : len_(len), words_(word_count(len), 0) {}

BitVec BitVec::from_uint(std::size_t len, std::uint64_t value) {
    BitVec v(len);
    for (std::size_t i = 0; i < len && i < 64; ++i) v.set(i, (value >> i) & 1u);
    return v;
}

BitVec BitVec::from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            v.set(i);
        else if (bits[i] != '0')
            throw InvalidInput("bit string contains '" + std::string(1, bits[i]) + "'");
    }
    return v;
}

BitVec BitVec::unit(std::size_t len, std::size_t index) {
    if (index >= len) throw InvalidInput("unit index out of range");
    BitVec v(len);
    v.set(index);
    return v;
}

void BitVec::set(std::size_t i, bool v) {
    const Word mask = Word{1} << (i % kWordBits);
    if (v)
        words_[i / kWordBits] |= mask;
    else
        words_[i / kWordBits] &= ~mask;
}

std::size_t BitVec::weight() const noexcept {
    std::size_t w = 0;
    for (Word x : words_) w += static_cast<std::size_t>(std::popcount(x));
    return w;
}

bool BitVec::is_zero() const noexcept {
    for (Word x : words_)
        if (x) return false;
    return true;
}

bool BitVec::dot(const BitVec& other) const {
    require_same_len(*this, other, "dot");
    Word acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

BitVec& BitVec::operator^=(const BitVec& other) {
    require_same_len(*this, other, "xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

BitVec& BitVec::operator&=(const BitVec& other) {
    require_same_len(*this, other, "and");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
}

std::uint64_t BitVec::to_uint() const { return words_.empty() ? 0 : words_[0]; }

std::string BitVec::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i)
        if (get(i)) s[i] = '1';
    return s;
}

std::string BitVec::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t nibbles = len_ == 0 ? 1 : (len_ + 3) / 4;
    std::string s;
    s.reserve(nibbles);
    for (std::size_t n = nibbles; n-- > 0;) {
        unsigned d = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t i = n * 4 + b;
            if (i < len_ && get(i)) d |= 1u << b;
        }
        s.push_back(digits[d]);
    }
    return s;
}

BitVec BitVec::slice(std::size_t lo, std::size_t count) const {
    if (lo + count > len_) throw InvalidInput("slice out of range");
    BitVec v(count);
    for (std::size_t i = 0; i < count; ++i) v.set(i, get(lo + i));
    return v;
}

std::ostream& operator<<(std::ostream& os, const BitVec& v) { return os << v.to_string(); }

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVec(cols)) {}

BitMatrix BitMatrix::identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
}

BitMatrix BitMatrix::from_rows(const std::vector<std::string>& rows) {
    std::vector<BitVec> vs;
    vs.reserve(rows.size());
    for (const auto& r : rows) vs.push_back(BitVec::from_string(r));
    const std::size_t cols = vs.empty() ? 0 : vs.front().size();
    return from_rows(std::move(vs), cols);
}

BitMatrix BitMatrix::from_rows(std::vector<BitVec> rows, std::size_t cols) {
    for (const auto& r : rows)
        if (r.size() != cols) throw InvalidInput("ragged matrix rows");
    BitMatrix m;
    m.cols_ = cols;
    m.rows_ = std::move(rows);
    return m;
}

BitVec BitMatrix::column(std::size_t c) const {
    BitVec v(rows());
    for (std::size_t r = 0; r < rows(); ++r) v.set(r, get(r, c));
    return v;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (get(r, c)) t.set(c, r);
    return t;
}

bool BitMatrix::is_zero() const {
    for (const auto& r : rows_)
        if (!r.is_zero()) return false;
    return true;
}

std::vector<std::string> BitMatrix::row_strings() const {
    std::vector<std::string> out;
    out.reserve(rows());
    for (const auto& r : rows_) out.push_back(r.to_string());
    return out;
}

std::string BitMatrix::serialize() const {
    std::ostringstream os;
    os << rows() << ' ' << cols_ << '\n';
    for (const auto& r : rows_) os << r.to_string() << '\n';
    return os.str();
}

BitMatrix BitMatrix::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::size_t rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw ParseError(1, "expected 'rows cols' header");
    std::vector<BitVec> vs;
    for (std::size_t r = 0; r < rows; ++r) {
        std::string line;
        if (!(is >> line)) throw ParseError(r + 2, "missing matrix row");
        if (line.size() != cols) throw ParseError(r + 2, "row has " + std::to_string(line.size()) + " bits");
        try {
            vs.push_back(BitVec::from_string(line));
        } catch (const InvalidInput& e) {
            throw ParseError(r + 2, e.what());
        }
    }
    return from_rows(std::move(vs), cols);
}

BitVec mat_vec_mul(const BitMatrix& m, const BitVec& v) {
    if (v.size() != m.cols())
        throw InvalidInput("mat_vec_mul: vector length " + std::to_string(v.size()) + " != cols " +
                           std::to_string(m.cols()));
    BitVec out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out.set(r, m.row(r).dot(v));
    return out;
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        throw InvalidInput("mat_mul: " + std::to_string(a.cols()) + " cols vs " + std::to_string(b.rows()) + " rows");
    BitMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.get(r, j)) out.row(r) ^= b.row(j);
    return out;
}

namespace {

// Reduced row echelon form in place; pivots taken at the lowest available column.
std::vector<std::size_t> rref(BitMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t next_row = 0;
    for (std::size_t c = 0; c < m.cols() && next_row < m.rows(); ++c) {
        std::size_t p = next_row;
        while (p < m.rows() && !m.get(p, c)) ++p;
        if (p == m.rows()) continue;
        std::swap(m.row(p), m.row(next_row));
        for (std::size_t r = 0; r < m.rows(); ++r)
            if (r != next_row && m.get(r, c)) m.row(r) ^= m.row(next_row);
        pivots.push_back(c);
        ++next_row;
    }
    return pivots;
}

// Pivot per row when the last rows() columns are the unit vectors in some order; empty otherwise.
std::vector<std::size_t> trailing_unit_pivots(const BitMatrix& h) {
    const std::size_t r = h.rows(), n = h.cols();
    if (r == 0 || r > n) return {};
    std::vector<std::size_t> piv(r, n);
    for (std::size_t c = n - r; c < n; ++c) {
        const BitVec col = h.column(c);
        if (col.weight() != 1) return {};
        std::size_t row = 0;
        while (!col.get(row)) ++row;
        if (piv[row] != n) return {};
        piv[row] = c;
    }
    return piv;
}

}  // namespace

std::size_t rank(const BitMatrix& m) {
    BitMatrix copy = m;
    return rref(copy).size();
}

SystematicForm systematic_form(const BitMatrix& h) {
    SystematicForm out;
    out.reduced = h;
    out.pivot_columns = trailing_unit_pivots(h);
    if (out.pivot_columns.empty()) out.pivot_columns = rref(out.reduced);
    if (out.pivot_columns.size() != h.rows())
        throw InvalidInput("systematic_form: rank " + std::to_string(out.pivot_columns.size()) + " < rows " +
                           std::to_string(h.rows()));
    std::vector<bool> is_pivot(h.cols(), false);
    for (auto c : out.pivot_columns) is_pivot[c] = true;
    for (std::size_t c = 0; c < h.cols(); ++c)
        if (!is_pivot[c]) out.free_columns.push_back(c);

    out.permutation = out.free_columns;
    out.permutation.insert(out.permutation.end(), out.pivot_columns.begin(), out.pivot_columns.end());
    out.matrix = BitMatrix(h.rows(), h.cols());
    for (std::size_t j = 0; j < h.cols(); ++j)
        for (std::size_t r = 0; r < h.rows(); ++r)
            if (out.reduced.get(r, out.permutation[j])) out.matrix.set(r, j);
    return out;
}

BitMatrix generator_from_parity_check(const BitMatrix& h) {
    const SystematicForm sf = systematic_form(h);
    const std::size_t k = sf.free_columns.size();
    BitMatrix g(k, h.cols());
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t col = sf.free_columns[i];
        g.set(i, col);
        // Row j of the reduced H reads: cw[pivot_j] = sum over free columns.
        for (std::size_t j = 0; j < sf.pivot_columns.size(); ++j)
            if (sf.reduced.get(j, col)) g.set(i, sf.pivot_columns[j]);
    }
    return g;
}

BitMatrix independent_rows(const BitMatrix& m) {
    std::vector<BitVec> kept;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<BitVec> trial(kept);
        trial.push_back(m.row(r));
        if (rank(BitMatrix::from_rows(trial, m.cols())) == trial.size()) kept = std::move(trial);
    }
    return BitMatrix::from_rows(std::move(kept), m.cols());
}

}  // namespace eccprove
