#include <doctest.h>

#include <set>

#include <nlohmann/json.hpp>

#include "eccprove/codes.hpp"
#include "eccprove/error.hpp"
#include "support.hpp"

using namespace eccprove;

TEST_CASE("gf(2^4) multiplication") {
    const Gf2mField f(4);
    CHECK(f.primitive_poly() == 0b10011);
    for (std::uint32_t a = 0; a < 16; ++a) {
        CHECK(gf_mul(f, a, 1) == a);
        CHECK(gf_mul(f, a, 0) == 0);
    }
    CHECK(gf_mul(f, 0b0010, 0b0010) == 0b0100);
    CHECK(gf_mul(f, 0b1000, 0b0010) == 0b0011);
}

TEST_CASE("field tables") {
    for (unsigned m = 3; m <= 6; ++m) {
        const Gf2mField f(m);
        CHECK(f.alpha_pow(f.order()) == 1);
        for (std::uint32_t a = 1; a <= f.order(); ++a) CHECK(f.antilog(f.log(a)) == a);
        // Shift-and-add reference product.
        for (std::uint32_t a = 0; a <= f.order(); ++a)
            for (std::uint32_t b = 0; b <= f.order(); ++b) {
                std::uint32_t p = 0, x = a;
                for (unsigned i = 0; i < m; ++i) {
                    if ((b >> i) & 1u) p ^= x;
                    x <<= 1;
                    if (x >> m) x ^= f.primitive_poly();
                }
                CHECK(f.mul(a, b) == p);
            }
    }
    CHECK(Gf2mField::default_poly(5) == 0b100101);
    CHECK(Gf2mField::default_poly(6) == 0b1000011);
}

TEST_CASE("hamming position syndromes") {
    const CodeSpec h = build_hamming(3);
    CHECK(h.n == 7);
    CHECK(h.k == 4);
    CHECK(h.t_correct == 1);
    CHECK(h.t_detect == 1);
    for (std::size_t j = 0; j < h.n; ++j) CHECK(mat_vec_mul(h.h, BitVec::unit(h.n, j)).to_uint() == j + 1);
    const CodeSpec h15 = build_hamming(4);
    CHECK(h15.n == 15);
    CHECK(h15.k == 11);
    CHECK(rank(h15.h) == 4);
    CHECK(min_distance(h) == 3);
    CHECK(min_distance(h) == testing::brute_min_distance(h.h));
}

TEST_CASE("hsiao columns") {
    const CodeSpec s = build_hsiao(16);
    CHECK(s.r == 6);
    CHECK(s.n == 22);
    std::set<std::uint64_t> cols;
    for (std::size_t j = 0; j < s.n; ++j) {
        const BitVec c = s.h.column(j);
        CHECK(c.weight() % 2 == 1);
        cols.insert(c.to_uint());
    }
    CHECK(cols.size() == s.n);
    CHECK(min_distance(s) == 4);
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = i + 1; j < s.n; ++j) {
            const BitVec syn = mat_vec_mul(s.h, BitVec::unit(s.n, i) ^ BitVec::unit(s.n, j));
            CHECK(!syn.is_zero());
            CHECK(syn.weight() % 2 == 0);
        }
    CHECK_THROWS_AS(build_hsiao(12), InvalidInput);
}

TEST_CASE("bch parameters and distances") {
    const CodeSpec b157 = build_bch(4, 2);
    CHECK(b157.n == 15);
    CHECK(b157.k == 7);
    CHECK(testing::brute_min_distance(b157.h) == 5);
    CHECK(min_distance(b157) == 5);

    const CodeSpec b155 = build_bch(4, 3);
    CHECK(b155.k == 5);
    CHECK(min_distance(b155) == 7);
    CHECK(testing::brute_min_distance(b155.h) == 7);

    const CodeSpec b31 = build_bch(5, 3);
    CHECK(b31.n == 31);
    CHECK(b31.k == 16);
    CHECK(min_distance(b31) >= 7);
    CHECK(rank(b31.h) == b31.r);

    CHECK_THROWS_AS(build_bch(4, 8), InvalidInput);
    CHECK_THROWS_AS(build_bch(2, 1), InvalidInput);
}

TEST_CASE("overall parity extension") {
    const CodeSpec e = extend_overall_parity(build_bch(4, 3));
    CHECK(e.id() == "ext-bch(16,5)");
    CHECK(e.n == 16);
    CHECK(e.r == 11);
    CHECK(e.t_correct == 3);
    CHECK(e.t_detect == 4);
    CHECK(min_distance(e) == 8);
    CHECK(testing::brute_min_distance(e.h) == 8);

    const CodeSpec h8 = extend_overall_parity(build_hamming(3));
    CHECK(h8.n == 8);
    CHECK(min_distance(h8) == 4);
    CHECK(h8.t_detect == 2);

    CHECK(e.h.row(e.r - 1).weight() == e.n);

    const CodeSpec e32 = extend_overall_parity(build_bch(5, 3));
    CHECK(e32.n == 32);
    CHECK(e32.k == 16);
    CHECK(min_distance(e32) == 8);
}

TEST_CASE("every constructed code meets its distance claim") {
    for (const CodeSpec& s : {build_hamming(3), build_hamming(4), extend_overall_parity(build_hamming(4)), build_hsiao(4),
                              build_hsiao(8), build_hsiao(16), build_bch(3, 1), build_bch(4, 2), build_bch(4, 3),
                              extend_overall_parity(build_bch(4, 3)), extend_overall_parity(build_bch(5, 3))}) {
        CAPTURE(s.id());
        CHECK(rank(s.h) == s.r);
        CHECK(min_distance(s) >= s.t_correct + s.t_detect + 1);
    }
    CHECK_THROWS_AS(min_distance(build_hsiao(32)), BudgetExceeded);
}

TEST_CASE("repetition code") {
    const CodeSpec rep = make_code(CodeFamily::Hamming, BitMatrix::from_rows({"110", "101"}), 1, 1);
    CHECK(min_distance(rep) == 3);
}

TEST_CASE("code json round trip") {
    const CodeSpec s = extend_overall_parity(build_bch(4, 3));
    const CodeSpec back = code_spec_from_json(to_json(s));
    CHECK(back.h == s.h);
    CHECK(back.id() == s.id());
    nlohmann::json bad = to_json(s);
    bad["n"] = 17;
    CHECK_THROWS_AS(code_spec_from_json(bad), InvalidInput);
}
