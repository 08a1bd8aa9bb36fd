#include <doctest.h>

#include <limits>

#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"
#include "eccprove/oracle.hpp"
#include "eccprove/property.hpp"
#include "support.hpp"

using namespace eccprove;

namespace {

// Pascal's triangle, independent of binomial().
BigCount pascal_sum(std::size_t n, std::size_t w) {
    std::vector<BigCount> row{1};
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<BigCount> next(i + 1, 1);
        for (std::size_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    BigCount s = 0;
    for (std::size_t j = 1; j <= std::min(w, n); ++j) s += row[j];
    return s;
}

}  // namespace

TEST_CASE("pattern counts") {
    CHECK(count_patterns(128, 4) == BigCount(11017632));
    CHECK(count_patterns(16, 4) == BigCount(2516));
    CHECK(count_patterns(32, 4) == BigCount(41448));
    CHECK(count_patterns(7, 0) == BigCount(0));
    CHECK(count_patterns(5, 9) == BigCount(31));
    for (std::size_t n = 0; n <= 70; n += 7)
        for (std::size_t w = 0; w <= 6; ++w) CHECK(count_patterns(n, w) == pascal_sum(n, w));
    CHECK(binomial(300, 150) > BigCount(std::numeric_limits<std::uint64_t>::max()));
    CHECK(binomial(4, 7) == BigCount(0));
}

TEST_CASE("reference encoder produces codewords") {
    std::mt19937_64 rng(61);
    for (const CodeSpec& s : {build_hamming(4), build_hsiao(16), extend_overall_parity(build_bch(5, 3))}) {
        for (int i = 0; i < 200; ++i) {
            const BitVec d = testing::random_bits(rng, s.k);
            const BitVec cw = encode_ref(s, d);
            CHECK(testing::naive_mul(s.h, cw).is_zero());
            const auto pos = s.data_positions();
            for (std::size_t j = 0; j < s.k; ++j) CHECK(cw.get(pos[j]) == d.get(j));
        }
        CHECK_THROWS_AS(encode_ref(s, BitVec(s.k + 1)), InvalidInput);
    }
}

TEST_CASE("reference decoder table and verdicts") {
    const CodeSpec s = extend_overall_parity(build_bch(4, 3));
    const ReferenceDecoder dec(s);
    CHECK(dec.table_size() == 2516 - 1820);
    const BitVec d = BitVec::from_string("11001");
    const BitVec cw = encode_ref(s, d);
    auto r = dec.decode(cw);
    CHECK(r.flag == 0);
    CHECK(r.data == d);
    CHECK(r.syndrome.is_zero());
    BitVec m(s.n);
    m.set(0);
    m.set(5);
    r = dec.decode(cw ^ m);
    CHECK(r.flag == 2);
    CHECK(r.data == d);
    CHECK(decode_matches(s, d, 2, r));
    m.set(9);
    m.set(13);
    r = dec.decode(cw ^ m);
    CHECK(r.flag == 4);
    CHECK(decode_matches(s, d, 4, r));
    CHECK(!decode_matches(s, d, 3, r));
}

TEST_CASE("exhaustive check on the flagship 16-bit code") {
    const CodeSpec s = extend_overall_parity(build_bch(4, 3));
    const auto rep = exhaustive_check(s, 4, DataMode::Fixed, kDefaultSeed, 2);
    CHECK(rep.total_patterns() == 2516);
    CHECK(rep.all_pass());
    CHECK(rep.fixed_data == draw_fixed_data(s.k, kDefaultSeed));
    REQUIRE(rep.per_weight.size() == 4);
    CHECK(rep.per_weight[3].patterns == 1820);
    const nlohmann::json j = to_json(rep);
    CHECK(j["code"] == "ext-bch(16,5)");
}

TEST_CASE("exhaustive check over all data words") {
    const CodeSpec h = build_hamming(3);
    const auto rep = exhaustive_check(h, 1, DataMode::All, kDefaultSeed);
    CHECK(rep.total_cases() == 112);
    CHECK(rep.data_words == 16);
    CHECK(rep.all_pass());
    CHECK(!rep.first_failure);
}

TEST_CASE("exhaustive check on the 32-bit code") {
    const CodeSpec s = extend_overall_parity(build_bch(5, 3));
    const auto rep = exhaustive_check(s, 4, DataMode::Fixed, kDefaultSeed, 4);
    CHECK(rep.total_patterns() == 41448);
    CHECK(rep.all_pass());
}

TEST_CASE("oracle budgets") {
    CHECK_THROWS_AS(exhaustive_check(extend_overall_parity(build_bch(4, 3)), 5, DataMode::Fixed, 1), InvalidInput);
    CHECK_THROWS_AS(exhaustive_check(build_hsiao(16), 1, DataMode::All, 1), BudgetExceeded);
}
