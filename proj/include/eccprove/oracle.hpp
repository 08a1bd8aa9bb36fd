#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

#include "eccprove/codes.hpp"
#include "eccprove/gf2.hpp"

namespace eccprove {

using BigCount = boost::multiprecision::cpp_int;

/// Exact sum of C(n, w) for w = 1..max_weight.
BigCount count_patterns(std::size_t n, std::size_t max_weight);
BigCount binomial(std::size_t n, std::size_t k);

BitVec encode_ref(const CodeSpec& spec, const BitVec& data);

struct DecodeResult {
    /// 0 = no_err, w = err_w.
    std::size_t flag = 0;
    BitVec data;
    BitVec ecc;
    BitVec syndrome;
};

/// Brute-force syndrome-table decoder, built independently of the circuits.
class ReferenceDecoder {
public:
    explicit ReferenceDecoder(const CodeSpec& spec);
    DecodeResult decode(const BitVec& received) const;
    std::size_t table_size() const noexcept { return table_.size(); }

private:
    const CodeSpec& spec_;
    std::vector<std::size_t> data_pos_;
    std::vector<std::size_t> check_pos_;
    std::unordered_map<std::uint64_t, BitVec> table_;
};

DecodeResult decode_ref(const CodeSpec& spec, const BitVec& received);

enum class DataMode { All, Fixed };

struct WeightStats {
    std::size_t weight = 0;
    std::uint64_t patterns = 0;
    std::uint64_t cases = 0;
    std::uint64_t pass = 0;
    std::uint64_t fail = 0;
};

struct ExhaustiveReport {
    std::string code_id;
    DataMode mode = DataMode::Fixed;
    std::uint64_t seed = 0;
    BitVec fixed_data;
    std::uint64_t data_words = 0;
    std::vector<WeightStats> per_weight;
    std::optional<std::pair<BitVec, BitVec>> first_failure;  // (data, mask)

    std::uint64_t total_patterns() const;
    std::uint64_t total_cases() const;
    bool all_pass() const;
};

inline constexpr std::size_t kOracleAllDataMaxK = 12;
inline constexpr std::uint64_t kOracleFixedMaxPatterns = 10'000'000;

/// Every mask of weight 1..max_weight against every data word (All) or the
/// seeded fixed word (Fixed). Rejects budgets beyond the limits above with
/// BudgetExceeded, and max_weight > t_detect with InvalidInput.
ExhaustiveReport exhaustive_check(const CodeSpec& spec, std::size_t max_weight, DataMode mode,
                                  std::uint64_t seed, std::size_t jobs = 1);

/// Expected decoder verdict for a mask of weight w within warranty.
bool decode_matches(const CodeSpec& spec, const BitVec& data, std::size_t weight, const DecodeResult& r);

nlohmann::json to_json(const ExhaustiveReport& r);

}  // namespace eccprove
