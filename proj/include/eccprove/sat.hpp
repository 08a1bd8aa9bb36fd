#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eccprove::sat {

using Var = std::uint32_t;

/// Variable plus polarity, packed as 2*var + negated.
class Lit {
public:
    constexpr Lit() = default;
    constexpr Lit(Var v, bool negated) : x_(2 * v + (negated ? 1u : 0u)) {}

    constexpr Var var() const noexcept { return x_ >> 1; }
    constexpr bool negated() const noexcept { return x_ & 1u; }
    constexpr std::uint32_t index() const noexcept { return x_; }
    constexpr Lit operator~() const noexcept { return from_index(x_ ^ 1u); }
    constexpr bool operator==(const Lit&) const = default;
    constexpr auto operator<=>(const Lit&) const = default;

    static constexpr Lit from_index(std::uint32_t x) {
        Lit l;
        l.x_ = x;
        return l;
    }
    /// DIMACS integer (+v / -v, 1-based).
    int to_dimacs() const noexcept { return negated() ? -static_cast<int>(var() + 1) : static_cast<int>(var() + 1); }
    static Lit from_dimacs(int d) { return Lit(static_cast<Var>((d < 0 ? -d : d) - 1), d < 0); }

private:
    std::uint32_t x_ = 0;
};

inline Lit pos(Var v) { return Lit(v, false); }
inline Lit neg(Var v) { return Lit(v, true); }

using Clause = std::vector<Lit>;

struct Cnf {
    std::size_t num_vars = 0;
    std::vector<Clause> clauses;
};

/// Sorts literals, drops duplicates; returns false for tautologies.
bool normalize_clause(Clause& c);

std::string export_dimacs(const Cnf& cnf);
/// Throws ParseError carrying the 1-based line number.
Cnf import_dimacs(std::string_view text);

enum class Status { Sat, Unsat, Unknown };
const char* to_string(Status s);

struct Stats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learnt_clauses = 0;
    double wall_ms = 0.0;
};

struct SolveResult {
    Status status = Status::Unknown;
    /// One entry per variable when Sat.
    std::vector<bool> model;
    /// On Unsat under assumptions: assumptions taking part in the final conflict.
    std::vector<Lit> core;
    /// Counters for this call only.
    Stats stats;
};

struct SolverOptions {
    /// Seed 0 keeps activities at zero initially; other seeds add tiny random
    /// initial activities. Same seed and budget give identical runs.
    std::uint64_t seed = 0;
    /// Per-solve conflict limit; 0 means unlimited.
    std::uint64_t conflict_budget = 0;
    double var_decay = 0.95;
    double clause_decay = 0.999;
    std::uint64_t restart_base = 100;
    double restart_factor = 1.5;
    /// Keep a copy of every added clause so models can be checked.
    bool keep_original = true;
};

/// CDCL solver: two watched literals, first-UIP learning with clause
/// minimization, VSIDS, phase saving, geometric restarts, activity-based
/// learnt clause deletion. Assumptions are forced decisions below every
/// ordinary decision level, so nothing is added to the clause database.
class Solver {
public:
    explicit Solver(SolverOptions opts = {});

    Var new_var();
    std::size_t num_vars() const noexcept { return assigns_.size(); }

    /// False once the clause set is known unsatisfiable at level 0.
    bool add_clause(std::span<const Lit> lits);
    bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

    SolveResult solve(std::span<const Lit> assumptions = {});
    SolveResult solve(std::initializer_list<Lit> assumptions) {
        return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
    }

    bool okay() const noexcept { return ok_; }
    void set_conflict_budget(std::uint64_t budget) { opts_.conflict_budget = budget; }

    /// Cumulative over all solve() calls.
    const Stats& total_stats() const noexcept { return total_; }

    /// Original clauses (when keep_original) for model checking and DIMACS export.
    Cnf original_cnf() const;
    std::vector<Clause> learnt_clauses() const;
    bool satisfies_original(const std::vector<bool>& model) const;

private:
    struct ClauseHeader {
        std::uint32_t start;
        std::uint32_t size;
        float activity;
        bool learnt;
        bool deleted;
    };
    using CRef = std::uint32_t;
    static constexpr CRef kNoReason = 0xffffffffu;

    struct Watcher {
        CRef cref;
        Lit blocker;
    };

    enum : std::int8_t { kUndef = 0, kTrue = 1, kFalse = -1 };

    std::int8_t value(Lit l) const {
        const std::int8_t a = assigns_[l.var()];
        return l.negated() ? static_cast<std::int8_t>(-a) : a;
    }
    std::uint32_t level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }
    Lit* lits(CRef c) { return &arena_[headers_[c].start]; }
    const Lit* lits(CRef c) const { return &arena_[headers_[c].start]; }

    CRef alloc_clause(std::span<const Lit> ls, bool learnt);
    void attach(CRef c);
    void enqueue(Lit l, CRef reason);
    CRef propagate();
    void analyze(CRef confl, std::vector<Lit>& out_learnt, std::uint32_t& out_btlevel);
    bool lit_redundant(Lit p, std::uint32_t abstract_levels);
    void analyze_final(Lit p, std::vector<Lit>& out_core);
    void cancel_until(std::uint32_t lvl);
    Lit pick_branch();
    void bump_var(Var v);
    void bump_clause(CRef c);
    void reduce_db();
    void collect_garbage();
    bool locked(CRef c) const;
    std::uint32_t abstract_level(Var v) const { return 1u << (var_level_[v] & 31u); }

    // heap on activity
    void heap_insert(Var v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    Var heap_pop();
    bool heap_contains(Var v) const { return v < heap_index_.size() && heap_index_[v] >= 0; }

    SolverOptions opts_;
    bool ok_ = true;

    std::vector<Lit> arena_;
    std::vector<ClauseHeader> headers_;
    std::vector<CRef> learnts_;
    std::size_t wasted_ = 0;
    std::vector<std::vector<Watcher>> watches_;

    std::vector<std::int8_t> assigns_;
    std::vector<std::uint8_t> polarity_;
    std::vector<std::uint32_t> var_level_;
    std::vector<CRef> reason_;
    std::vector<double> activity_;
    std::vector<std::uint8_t> seen_;
    std::vector<Lit> trail_;
    std::vector<std::uint32_t> trail_lim_;
    std::size_t qhead_ = 0;

    std::vector<Var> heap_;
    std::vector<std::int64_t> heap_index_;

    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    double max_learnts_ = 0;
    std::vector<Lit> analyze_stack_;
    std::vector<Lit> analyze_toclear_;

    std::vector<Clause> original_;
    Stats total_;
    std::mt19937_64 rng_;
};

}  // namespace eccprove::sat
