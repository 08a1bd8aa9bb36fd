#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eccprove/circuit.hpp"
#include "eccprove/property.hpp"
#include "eccprove/sat.hpp"

namespace eccprove::mc {

using sat::Lit;

/// Gate-level CNF construction with constant folding and structural hashing.
/// Gate outputs are full equivalences, so any gate literal may be assumed
/// either way.
///
/// XOR gates are additionally hashed by their linear form: every XOR literal
/// is known as (set of non-XOR variables, constant) over GF(2), and two XOR
/// trees with the same form share one literal. Forms wider than
/// kMaxLinearSupport fall back to plain structural hashing.
class CnfBuilder {
public:
    explicit CnfBuilder(sat::Solver& solver);

    sat::Solver& solver() noexcept { return solver_; }
    Lit constant(bool v) const noexcept { return v ? true_ : ~true_; }
    Lit fresh();

    Lit and2(Lit a, Lit b);
    Lit or2(Lit a, Lit b) { return ~and2(~a, ~b); }
    Lit xor2(Lit a, Lit b);
    Lit mux(Lit sel, Lit t, Lit e);
    Lit and_all(const std::vector<Lit>& xs);
    Lit or_all(const std::vector<Lit>& xs);
    Lit equal(const std::vector<Lit>& a, const std::vector<Lit>& b);

    /// Sequential counter: result[j] is "at least j+1 of xs are true", j < upto.
    std::vector<Lit> at_least(const std::vector<Lit>& xs, std::size_t upto);
    Lit weight_eq(const std::vector<Lit>& xs, std::size_t w);
    Lit weight_le(const std::vector<Lit>& xs, std::size_t w);
    Lit one_hot(const std::vector<Lit>& xs);

    void add_clause(std::initializer_list<Lit> c);
    void add_clause(const std::vector<Lit>& c);

    /// Clauses emitted for gate definitions (excludes the constant unit).
    std::size_t gate_clauses() const noexcept { return gate_clauses_; }

    bool is_const(Lit l) const noexcept { return l.var() == true_.var(); }

    static constexpr std::size_t kMaxLinearSupport = 256;

private:
    struct LinearForm {
        std::vector<sat::Var> support;  // sorted
        bool constant = false;
    };
    LinearForm form_of(Lit l) const;

    sat::Solver& solver_;
    Lit true_;
    std::size_t gate_clauses_ = 0;
    std::unordered_map<std::uint64_t, Lit> and_cache_;
    std::unordered_map<std::uint64_t, Lit> xor_cache_;
    std::unordered_map<sat::Var, LinearForm> forms_;
    std::map<std::vector<sat::Var>, std::pair<Lit, bool>> by_form_;
};

/// Literal per node of `c`. Inputs bound through `inputs` (port name -> bits)
/// when present, fresh otherwise; registers take `state` when given, fresh otherwise.
std::vector<Lit> tseitin_encode(const Circuit& c, CnfBuilder& b,
                                const std::map<std::string, std::vector<Lit>>& inputs = {},
                                const std::vector<Lit>& state = {});

/// Time-frame expansion of a circuit. Frame f+1's registers are frame f's
/// next-state literals.
class Unroller {
public:
    /// `from_reset`: frame-0 registers are their init constants; otherwise free.
    Unroller(const Circuit& c, CnfBuilder& b, bool from_reset);

    std::size_t frames() const noexcept { return frames_.size(); }
    void extend_to(std::size_t count);
    const std::vector<Lit>& nodes(std::size_t frame) const { return frames_.at(frame); }
    std::vector<Lit> port(const std::string& name, std::size_t frame) const;
    std::vector<Lit> state(std::size_t frame) const;
    const Circuit& circuit() const noexcept { return c_; }

private:
    const Circuit& c_;
    CnfBuilder& b_;
    std::vector<std::vector<Lit>> frames_;
};

/// Literal of a 1-bit property expression instantiated at `frame`; symbols get
/// fresh variables for this instance (reported through `symbols` if non-null).
Lit encode_property(const ExprPtr& e, Unroller& u, CnfBuilder& b, std::size_t frame,
                    std::map<std::string, std::vector<Lit>>* symbols = nullptr);
std::vector<Lit> encode_expr(const ExprPtr& e, Unroller& u, CnfBuilder& b, std::size_t frame,
                             std::map<std::string, std::vector<Lit>>& symbols);

struct Trace {
    std::vector<BitVec> states;
    std::vector<Assignment> inputs;
    std::vector<Assignment> outputs;
    std::map<std::string, BitVec> symbols;
    bool rooted_at_reset = false;
    std::size_t violation_frame = 0;
    std::string property;
    /// Free-form key/value header (e.g. the run configuration for replay).
    std::map<std::string, std::string> meta;

    std::size_t length() const noexcept { return inputs.size(); }
};

/// Per-cycle text dump; `annotate` may add a comment line per cycle.
std::string serialize_trace(const Trace& t, const std::function<std::string(std::size_t cycle)>& annotate = {});
Trace parse_trace(std::string_view text);

struct ReplayResult {
    /// Simulated outputs match the recorded ones on every cycle.
    bool consistent = false;
    /// The target evaluates to false at the violation frame.
    bool violates = false;
    std::vector<Assignment> outputs;
};

/// Re-simulates from the trace's cycle-0 state with its inputs.
ReplayResult replay(const Circuit& c, const Property& target, const Trace& t);

enum class Verdict { Proven, BoundedPass, Cex, InductionCex, Unknown };
const char* to_string(Verdict v);

struct EngineConfig {
    std::size_t k_max = 32;
    std::uint64_t conflict_budget = 10'000'000;
    bool unique_states = true;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    /// Called after each base/step query when set.
    std::function<void(const std::string&)> progress;
};

struct CheckResult {
    Verdict verdict = Verdict::Unknown;
    std::size_t bound = 0;
    std::optional<Trace> trace;
    sat::Stats stats;
    double wall_ms = 0.0;
    std::string detail;
};

/// I and assumptions at every frame, target negated at depth k, for k = 0..k_max.
CheckResult bmc(const Circuit& c, const Property& target, const std::vector<Property>& assumptions,
                const EngineConfig& cfg);

/// The base query at `depth` (I, assumptions at every frame, target negated at
/// `depth`) as a standalone CNF for external solvers.
sat::Cnf base_query_cnf(const Circuit& c, const Property& target, const std::vector<Property>& assumptions,
                        std::size_t depth);

/// Base/step k-induction. `assumptions` (proven lemmas and environment
/// constraints) hold at every frame of both checks.
CheckResult k_induction(const Circuit& c, const Property& target, const std::vector<Property>& assumptions,
                        const EngineConfig& cfg);

struct PropertyReport {
    std::string property;
    PropertyRole role = PropertyRole::Target;
    CheckResult result;
    std::vector<std::string> assumed;
    std::vector<std::string> broken_dependencies;
    bool degraded() const noexcept { return !broken_dependencies.empty(); }
};

struct Report {
    std::vector<PropertyReport> entries;
    const PropertyReport* find(const std::string& name) const;
    bool all_proven() const;
};

/// Lemmas first (in order), then targets, each with the constraints of the plan
/// and its proven dependencies. Failed dependencies are dropped and flagged.
Report prove_plan(const VerificationPlan& plan, const EngineConfig& cfg);

nlohmann::json to_json(const PropertyReport& r, bool include_timing = true);

}  // namespace eccprove::mc
