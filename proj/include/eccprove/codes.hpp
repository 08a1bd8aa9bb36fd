#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eccprove/gf2.hpp"

namespace eccprove {

enum class CodeFamily { Hamming, ExtendedHamming, Hsiao, Bch, ExtendedBch };

std::string to_string(CodeFamily f);
CodeFamily code_family_from_string(const std::string& s);

/// A binary linear code given by its parity-check matrix, plus the
/// correction/detection guarantee it is built to provide.
struct CodeSpec {
    CodeFamily family = CodeFamily::Hamming;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t r = 0;
    std::size_t t_correct = 0;
    std::size_t t_detect = 0;
    BitMatrix h;

    /// Codeword positions carrying data bits (data bit i lives at data_positions()[i]).
    std::vector<std::size_t> data_positions() const;
    /// Codeword positions carrying check bits, one per H row.
    std::vector<std::size_t> check_positions() const;

    /// e.g. "ext-bch(16,5)"
    std::string id() const;
};

nlohmann::json to_json(const CodeSpec& spec);
CodeSpec code_spec_from_json(const nlohmann::json& j);

/// GF(2^m) with log/antilog tables over a fixed primitive polynomial.
class Gf2mField {
public:
    /// Uses the built-in primitive polynomial for m in [2, 8].
    explicit Gf2mField(unsigned m);
    Gf2mField(unsigned m, std::uint32_t primitive_poly);

    unsigned m() const noexcept { return m_; }
    std::uint32_t primitive_poly() const noexcept { return poly_; }
    std::uint32_t order() const noexcept { return (1u << m_) - 1; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    /// alpha^e, any e >= 0.
    std::uint32_t alpha_pow(std::uint64_t e) const { return antilog_[e % order()]; }
    std::uint32_t log(std::uint32_t a) const;
    std::uint32_t antilog(std::uint32_t e) const { return antilog_[e % order()]; }

    static std::uint32_t default_poly(unsigned m);

private:
    void build_tables();

    unsigned m_;
    std::uint32_t poly_;
    std::vector<std::uint32_t> log_;
    std::vector<std::uint32_t> antilog_;
};

inline std::uint32_t gf_mul(const Gf2mField& f, std::uint32_t a, std::uint32_t b) { return f.mul(a, b); }

CodeSpec build_hamming(unsigned m);
CodeSpec build_hsiao(std::size_t k);
CodeSpec build_bch(unsigned m, std::size_t t);
CodeSpec extend_overall_parity(const CodeSpec& spec);

inline constexpr std::size_t kMinDistanceMaxK = 20;

/// Exhaustive over all 2^k codewords; rejects k > kMinDistanceMaxK.
std::size_t min_distance(const CodeSpec& spec);

/// Code with an arbitrary parity-check matrix (rank must equal rows).
CodeSpec make_code(CodeFamily family, BitMatrix h, std::size_t t_correct, std::size_t t_detect);

}  // namespace eccprove
