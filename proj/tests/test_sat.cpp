#include <doctest.h>

#include <algorithm>
#include <random>

#include "eccprove/error.hpp"
#include "eccprove/sat.hpp"

using namespace eccprove;
using namespace eccprove::sat;

namespace {

Cnf random_3cnf(std::mt19937_64& rng, std::size_t vars, std::size_t clauses) {
    Cnf cnf;
    cnf.num_vars = vars;
    for (std::size_t i = 0; i < clauses; ++i) {
        Clause c;
        for (int j = 0; j < 3; ++j) c.push_back(Lit(static_cast<Var>(rng() % vars), rng() & 1u));
        cnf.clauses.push_back(c);
    }
    return cnf;
}

bool eval_clause(const Clause& c, std::uint64_t x) {
    for (Lit l : c)
        if (((x >> l.var()) & 1u) != l.negated()) return true;
    return false;
}

bool brute_sat(const Cnf& cnf) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << cnf.num_vars); ++x) {
        bool ok = true;
        for (const auto& c : cnf.clauses)
            if (!eval_clause(c, x)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

bool model_satisfies(const Cnf& cnf, const std::vector<bool>& model) {
    for (const auto& c : cnf.clauses) {
        bool sat = false;
        for (Lit l : c) sat |= model.at(l.var()) != l.negated();
        if (!sat) return false;
    }
    return true;
}

void load(Solver& s, const Cnf& cnf) {
    while (s.num_vars() < cnf.num_vars) s.new_var();
    for (const auto& c : cnf.clauses) s.add_clause(c);
}

// pigeons > holes, variable p*holes + h means pigeon p sits in hole h.
Cnf pigeonhole(std::size_t pigeons, std::size_t holes) {
    Cnf cnf;
    cnf.num_vars = pigeons * holes;
    auto v = [&](std::size_t p, std::size_t h) { return static_cast<Var>(p * holes + h); };
    for (std::size_t p = 0; p < pigeons; ++p) {
        Clause c;
        for (std::size_t h = 0; h < holes; ++h) c.push_back(pos(v(p, h)));
        cnf.clauses.push_back(c);
    }
    for (std::size_t h = 0; h < holes; ++h)
        for (std::size_t p = 0; p < pigeons; ++p)
            for (std::size_t q = p + 1; q < pigeons; ++q) cnf.clauses.push_back({neg(v(p, h)), neg(v(q, h))});
    return cnf;
}

}  // namespace

TEST_CASE("literal packing") {
    const Lit a(3, true);
    CHECK(a.var() == 3);
    CHECK(a.negated());
    CHECK((~a).index() == 6);
    CHECK(a.to_dimacs() == -4);
    CHECK(Lit::from_dimacs(-4) == a);
    CHECK(Lit::from_dimacs(1) == pos(0));
}

TEST_CASE("small formulas") {
    {
        Solver s;
        const Var x = s.new_var(), y = s.new_var();
        s.add_clause({pos(x), pos(y)});
        s.add_clause({neg(x)});
        const auto r = s.solve();
        REQUIRE(r.status == Status::Sat);
        CHECK(!r.model[x]);
        CHECK(r.model[y]);
    }
    {
        Solver s;
        const Var x = s.new_var();
        s.add_clause({pos(x)});
        CHECK(!s.add_clause({neg(x)}));
        CHECK(s.solve().status == Status::Unsat);
    }
    {
        Solver s;
        s.new_var();
        CHECK(!s.add_clause(std::span<const Lit>{}));
        CHECK(s.solve().status == Status::Unsat);
    }
    {
        Solver s;
        const Var x = s.new_var();
        CHECK(s.add_clause({pos(x), neg(x)}));
        CHECK(s.solve().status == Status::Sat);
    }
}

TEST_CASE("clause normalization") {
    Clause c{pos(2), neg(1), pos(2)};
    CHECK(normalize_clause(c));
    CHECK(c == Clause{neg(1), pos(2)});
    Clause t{pos(0), neg(0)};
    CHECK(!normalize_clause(t));
}

TEST_CASE("random 3-cnf agrees with brute force") {
    std::mt19937_64 rng(31);
    std::size_t sat = 0, unsat = 0;
    for (int it = 0; it < 1000; ++it) {
        const std::size_t vars = 3 + rng() % 10;
        const Cnf cnf = random_3cnf(rng, vars, 1 + rng() % (6 * vars));
        Solver s(SolverOptions{.seed = static_cast<std::uint64_t>(it % 3)});
        load(s, cnf);
        const auto r = s.solve();
        const bool expected = brute_sat(cnf);
        REQUIRE(r.status == (expected ? Status::Sat : Status::Unsat));
        if (expected) {
            ++sat;
            CHECK(model_satisfies(cnf, r.model));
            CHECK(s.satisfies_original(r.model));
        } else {
            ++unsat;
        }
    }
    CHECK(sat > 100);
    CHECK(unsat > 100);
}

TEST_CASE("pigeonhole formulas are unsatisfiable") {
    for (auto [p, h] : {std::pair{4, 3}, std::pair{5, 4}, std::pair{6, 5}}) {
        Solver s;
        load(s, pigeonhole(p, h));
        CHECK(s.solve().status == Status::Unsat);
    }
    Solver s;
    load(s, pigeonhole(4, 4));
    const auto r = s.solve();
    REQUIRE(r.status == Status::Sat);
    CHECK(model_satisfies(pigeonhole(4, 4), r.model));
}

TEST_CASE("assumptions and cores") {
    std::mt19937_64 rng(32);
    for (int it = 0; it < 300; ++it) {
        const std::size_t vars = 6 + rng() % 6;
        const Cnf cnf = random_3cnf(rng, vars, 2 * vars + rng() % (2 * vars));
        Solver s;
        load(s, cnf);
        std::vector<Lit> assumptions;
        for (std::size_t i = 0; i < 4; ++i) assumptions.push_back(Lit(static_cast<Var>(rng() % vars), rng() & 1u));
        Cnf with = cnf;
        for (Lit a : assumptions) with.clauses.push_back({a});
        const auto r = s.solve(assumptions);
        REQUIRE(r.status == (brute_sat(with) ? Status::Sat : Status::Unsat));
        if (r.status == Status::Sat) {
            CHECK(model_satisfies(with, r.model));
        } else {
            for (Lit c : r.core) CHECK(std::find(assumptions.begin(), assumptions.end(), c) != assumptions.end());
            CHECK(s.solve(r.core).status == Status::Unsat);
        }
        // Assumptions leave nothing behind.
        CHECK(s.solve().status == (brute_sat(cnf) ? Status::Sat : Status::Unsat));
    }
}

TEST_CASE("incremental clause addition") {
    Solver s;
    const Var a = s.new_var(), b = s.new_var(), c = s.new_var();
    s.add_clause({pos(a), pos(b), pos(c)});
    CHECK(s.solve().status == Status::Sat);
    s.add_clause({neg(a)});
    s.add_clause({neg(b)});
    auto r = s.solve();
    REQUIRE(r.status == Status::Sat);
    CHECK(r.model[c]);
    s.add_clause({neg(c)});
    CHECK(s.solve().status == Status::Unsat);
}

TEST_CASE("conflict budget yields unknown") {
    Solver s(SolverOptions{.conflict_budget = 5});
    load(s, pigeonhole(8, 7));
    const auto r = s.solve();
    CHECK(r.status == Status::Unknown);
    CHECK(r.stats.conflicts <= 5);
}

TEST_CASE("same seed gives the same run") {
    std::mt19937_64 rng(33);
    const Cnf cnf = random_3cnf(rng, 60, 255);
    auto run = [&](std::uint64_t seed) {
        Solver s(SolverOptions{.seed = seed});
        load(s, cnf);
        return s.solve();
    };
    const auto a = run(7), b = run(7);
    CHECK(a.status == b.status);
    CHECK(a.model == b.model);
    CHECK(a.stats.conflicts == b.stats.conflicts);
    CHECK(a.stats.decisions == b.stats.decisions);
}

TEST_CASE("dimacs round trip") {
    std::mt19937_64 rng(34);
    const Cnf cnf = random_3cnf(rng, 20, 50);
    const std::string text = export_dimacs(cnf);
    CHECK(text.find("p cnf 20 50") != std::string::npos);
    const Cnf back = import_dimacs(text);
    CHECK(back.num_vars == cnf.num_vars);
    CHECK(back.clauses == cnf.clauses);
    CHECK(export_dimacs(back) == text);

    const Cnf multi = import_dimacs("c comment\np cnf 3 2\n1 -2\n 3 0 -1\n0\n");
    REQUIRE(multi.clauses.size() == 2);
    CHECK(multi.clauses[0] == Clause{pos(0), neg(1), pos(2)});
    CHECK(multi.clauses[1] == Clause{neg(0)});
}

TEST_CASE("dimacs errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            import_dimacs(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("p cnf 2 1\n1 x 0\n") == 2);
    CHECK(line_of("c a\nc b\np cnf 2 1\n1 3 0\n") == 4);
    CHECK(line_of("1 2 0\n") == 1);
    CHECK(line_of("p cnf 2 1\n1 2\n") == 2);
    CHECK(line_of("p cnf 2 2\n1 2 0\n") != 0);
    CHECK(line_of("p dnf 2 1\n") == 1);
    CHECK(line_of("p cnf 2 1\n1 -2 0\n") == 0);
}

TEST_CASE("original cnf export") {
    Solver s;
    load(s, pigeonhole(3, 2));
    const Cnf back = s.original_cnf();
    CHECK(back.num_vars == 6);
    Solver t;
    load(t, back);
    CHECK(t.solve().status == Status::Unsat);
    CHECK_THROWS_AS(s.add_clause({pos(99)}), InvalidInput);
}
