#include "eccprove/codes.hpp"

#include <algorithm>
#include <bit>
#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"

namespace eccprove {

std::string to_string(CodeFamily f) {
    switch (f) {
        case CodeFamily::Hamming: return "hamming";
        case CodeFamily::ExtendedHamming: return "ext-hamming";
        case CodeFamily::Hsiao: return "hsiao";
        case CodeFamily::Bch: return "bch";
        case CodeFamily::ExtendedBch: return "ext-bch";
    }
    return "unknown";
}

CodeFamily code_family_from_string(const std::string& s) {
    if (s == "hamming") return CodeFamily::Hamming;
    if (s == "ext-hamming" || s == "extended-hamming") return CodeFamily::ExtendedHamming;
    if (s == "hsiao") return CodeFamily::Hsiao;
    if (s == "bch") return CodeFamily::Bch;
    if (s == "ext-bch" || s == "extended-bch") return CodeFamily::ExtendedBch;
    throw InvalidInput("unknown code family '" + s + "'");
}

std::vector<std::size_t> CodeSpec::data_positions() const { return systematic_form(h).free_columns; }

std::vector<std::size_t> CodeSpec::check_positions() const { return systematic_form(h).pivot_columns; }

std::string CodeSpec::id() const {
    return to_string(family) + "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

nlohmann::json to_json(const CodeSpec& spec) {
    return {{"family", to_string(spec.family)},
            {"n", spec.n},
            {"k", spec.k},
            {"r", spec.r},
            {"t_correct", spec.t_correct},
            {"t_detect", spec.t_detect},
            {"H", spec.h.row_strings()}};
}

CodeSpec code_spec_from_json(const nlohmann::json& j) {
    try {
        CodeSpec s = make_code(code_family_from_string(j.at("family").get<std::string>()),
                               BitMatrix::from_rows(j.at("H").get<std::vector<std::string>>()),
                               j.at("t_correct").get<std::size_t>(), j.at("t_detect").get<std::size_t>());
        if (s.n != j.at("n").get<std::size_t>() || s.k != j.at("k").get<std::size_t>() ||
            s.r != j.at("r").get<std::size_t>())
            throw InvalidInput("code JSON: n/k/r disagree with H");
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("code JSON: ") + e.what());
    }
}

CodeSpec make_code(CodeFamily family, BitMatrix h, std::size_t t_correct, std::size_t t_detect) {
    if (t_detect < t_correct) throw InvalidInput("t_detect < t_correct");
    if (rank(h) != h.rows()) throw InvalidInput("parity-check matrix is rank deficient");
    if (h.cols() <= h.rows()) throw InvalidInput("code has no data bits");
    CodeSpec s;
    s.family = family;
    s.n = h.cols();
    s.r = h.rows();
    s.k = s.n - s.r;
    s.t_correct = t_correct;
    s.t_detect = t_detect;
    s.h = std::move(h);
    return s;
}

// ---------------------------------------------------------------------------

std::uint32_t Gf2mField::default_poly(unsigned m) {
    switch (m) {
        case 2: return 0b111;
        case 3: return 0b1011;        // x^3 + x + 1
        case 4: return 0b10011;       // x^4 + x + 1
        case 5: return 0b100101;      // x^5 + x^2 + 1
        case 6: return 0b1000011;     // x^6 + x + 1
        case 7: return 0b10001001;    // x^7 + x^3 + 1
        case 8: return 0b100011101;   // x^8 + x^4 + x^3 + x^2 + 1
        default: throw InvalidInput("no built-in primitive polynomial for m=" + std::to_string(m));
    }
}

Gf2mField::Gf2mField(unsigned m) : Gf2mField(m, default_poly(m)) {}

Gf2mField::Gf2mField(unsigned m, std::uint32_t primitive_poly) : m_(m), poly_(primitive_poly) {
    if (m < 2 || m > 16) throw InvalidInput("field degree out of range");
    if (std::bit_width(poly_) != m + 1) throw InvalidInput("polynomial degree != m");
    build_tables();
}

void Gf2mField::build_tables() {
    const std::uint32_t q = 1u << m_;
    log_.assign(q, 0);
    antilog_.assign(order(), 0);
    std::uint32_t x = 1;
    for (std::uint32_t e = 0; e < order(); ++e) {
        if (e > 0 && x == 1) throw InvalidInput("polynomial is not primitive");
        antilog_[e] = x;
        log_[x] = e;
        x <<= 1;
        if (x & q) x ^= poly_;
    }
    if (x != 1) throw InvalidInput("polynomial is not primitive");
}

std::uint32_t Gf2mField::mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return antilog_[(log_[a] + log_[b]) % order()];
}

std::uint32_t Gf2mField::log(std::uint32_t a) const {
    if (a == 0 || a > order()) throw InvalidInput("log of zero or out-of-field element");
    return log_[a];
}

// ---------------------------------------------------------------------------

CodeSpec build_hamming(unsigned m) {
    if (m < 2 || m > 16) throw InvalidInput("hamming: m must be in [2,16]");
    const std::size_t n = (std::size_t{1} << m) - 1;
    BitMatrix h(m, n);
    // Index j holds position j+1, whose column is the binary encoding of j+1.
    for (std::size_t j = 0; j < n; ++j)
        for (unsigned b = 0; b < m; ++b)
            if (((j + 1) >> b) & 1u) h.set(b, j);
    return make_code(CodeFamily::Hamming, std::move(h), 1, 1);
}

CodeSpec build_hsiao(std::size_t k) {
    std::size_t r = 0;
    switch (k) {
        case 4: r = 4; break;
        case 8: r = 5; break;
        case 16: r = 6; break;
        case 32: r = 7; break;
        default: throw InvalidInput("hsiao: k must be one of 4, 8, 16, 32");
    }
    const std::size_t n = k + r;
    std::vector<std::uint32_t> cols;
    for (unsigned w = 1; w <= r && cols.size() < n; w += 2)
        for (std::uint32_t v = 1; v < (1u << r) && cols.size() < n; ++v)
            if (static_cast<unsigned>(std::popcount(v)) == w) cols.push_back(v);
    BitMatrix h(r, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t b = 0; b < r; ++b)
            if ((cols[j] >> b) & 1u) h.set(b, j);
    return make_code(CodeFamily::Hsiao, std::move(h), 1, 2);
}

CodeSpec build_bch(unsigned m, std::size_t t) {
    if (m < 3 || m > 6) throw InvalidInput("bch: m must be in [3,6]");
    if (t < 1) throw InvalidInput("bch: t must be >= 1");
    const Gf2mField field(m);
    const std::size_t n = field.order();
    BitMatrix full(m * t, n);
    for (std::size_t idx = 0; idx < t; ++idx) {
        const std::uint64_t i = 2 * idx + 1;
        for (std::size_t j = 0; j < n; ++j) {
            const std::uint32_t e = field.alpha_pow(i * j);
            for (unsigned b = 0; b < m; ++b)
                if ((e >> b) & 1u) full.set(idx * m + b, j);
        }
    }
    BitMatrix h = independent_rows(full);
    if (h.rows() >= n) throw InvalidInput("bch: parameters leave no data bits");
    return make_code(CodeFamily::Bch, std::move(h), t, t);
}

CodeSpec extend_overall_parity(const CodeSpec& spec) {
    if (spec.k <= kMinDistanceMaxK && min_distance(spec) % 2 == 0)
        throw InvalidInput("extend_overall_parity: minimum distance is already even");
    BitMatrix h(spec.r + 1, spec.n + 1);
    for (std::size_t r = 0; r < spec.r; ++r)
        for (std::size_t c = 0; c < spec.n; ++c) h.set(r, c, spec.h.get(r, c));
    for (std::size_t c = 0; c <= spec.n; ++c) h.set(spec.r, c);
    CodeFamily family = spec.family == CodeFamily::Hamming ? CodeFamily::ExtendedHamming : CodeFamily::ExtendedBch;
    return make_code(family, std::move(h), spec.t_correct, spec.t_correct + 1);
}

std::size_t min_distance(const CodeSpec& spec) {
    if (spec.k > kMinDistanceMaxK)
        throw BudgetExceeded("min_distance: k=" + std::to_string(spec.k) + " exceeds exhaustive limit " +
                             std::to_string(kMinDistanceMaxK));
    const BitMatrix g = generator_from_parity_check(spec.h);
    BitVec cw(spec.n);
    std::size_t best = spec.n + 1;
    // Gray-code walk: consecutive codewords differ by one generator row.
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << spec.k); ++i) {
        cw ^= g.row(static_cast<std::size_t>(std::countr_zero(i)));
        best = std::min(best, cw.weight());
    }
    return best;
}

}  // namespace eccprove
