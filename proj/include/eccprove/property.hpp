#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eccprove/circuit.hpp"
#include "eccprove/codes.hpp"
#include "eccprove/gf2.hpp"

namespace eccprove {

enum class ExprKind { Const, Signal, Symbol, Not, And, Or, Xor, Implies, Eq, OneHot, WeightEq, WeightLe, Apply, Concat, Slice };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Word-level expression. Every node has a fixed bit width; boolean
/// connectives on 1-bit operands are the property formulas.
struct Expr {
    ExprKind kind = ExprKind::Const;
    std::size_t width = 0;
    BitVec value;             // Const
    std::string name;         // Signal port, Symbol name, Apply output port
    std::size_t offset = 0;   // Signal cycle offset, Slice low bit
    std::size_t bound = 0;    // WeightEq / WeightLe
    std::vector<ExprPtr> args;
    std::shared_ptr<const Circuit> fn;  // Apply
};

namespace ex {

ExprPtr constant(const BitVec& v);
ExprPtr bit(bool v);
/// Port of `c` (input or output) read `offset` cycles after the property's frame.
ExprPtr signal(const Circuit& c, const std::string& port, std::size_t offset = 0);
/// Unconstrained value; every instantiation of the property gets a fresh copy.
ExprPtr symbol(const std::string& name, std::size_t width);
ExprPtr lnot(ExprPtr a);
ExprPtr land(ExprPtr a, ExprPtr b);
ExprPtr lor(ExprPtr a, ExprPtr b);
ExprPtr lxor(ExprPtr a, ExprPtr b);
ExprPtr all(const std::vector<ExprPtr>& xs);
ExprPtr any(const std::vector<ExprPtr>& xs);
ExprPtr implies(ExprPtr a, ExprPtr b);
ExprPtr eq(ExprPtr a, ExprPtr b);
ExprPtr one_hot(ExprPtr a);
ExprPtr weight_eq(ExprPtr a, std::size_t w);
ExprPtr weight_le(ExprPtr a, std::size_t w);
/// Combinational `fn` applied to `args` (one per input port, in port order); result is output `port`.
ExprPtr apply(std::shared_ptr<const Circuit> fn, const std::string& port, std::vector<ExprPtr> args);
/// args[0] supplies the low bits.
ExprPtr concat(std::vector<ExprPtr> args);
ExprPtr slice(ExprPtr a, std::size_t lo, std::size_t count);

}  // namespace ex

/// Largest Signal offset in the tree.
std::size_t max_offset(const ExprPtr& e);
/// Prefix form, e.g. "(implies (weight= (xor cw_i@0 cw_o@0) 2) err_2@0)".
std::string to_prefix(const ExprPtr& e);
/// Throws InvalidInput if a signal is not a port of `c` or widths disagree.
void check_expr(const ExprPtr& e, const Circuit& c);

using SignalLookup = std::function<BitVec(const std::string& port, std::size_t cycle)>;

/// Concrete value at frame `frame`; symbols are looked up in `symbols`
/// (missing ones read as zero).
BitVec evaluate(const ExprPtr& e, const SignalLookup& signals, std::size_t frame,
                const std::map<std::string, BitVec>& symbols = {});

enum class PropertyKind { Assert, Assume };
enum class PropertyRole { Target, Lemma, Constraint };

const char* to_string(PropertyKind k);
const char* to_string(PropertyRole r);

struct Property {
    std::string name;
    PropertyKind kind = PropertyKind::Assert;
    PropertyRole role = PropertyRole::Target;
    ExprPtr expr;
    std::optional<std::size_t> max_weight;
    std::string note;
    std::vector<std::string> depends_on;
};

Property make_target(std::string name, ExprPtr expr, std::string note = {});
Property make_lemma(std::string name, ExprPtr expr, std::string note = {});
Property make_constraint(std::string name, ExprPtr expr, std::string note = {});

struct VerificationPlan {
    std::shared_ptr<const Circuit> system;
    std::vector<Property> properties;

    /// Unique names, dependencies name earlier lemmas, expressions type-check.
    void validate() const;
    const Property* find(const std::string& name) const;
};

nlohmann::json to_json(const Property& p);
nlohmann::json to_json(const VerificationPlan& plan);

/// One-hot flags, detection per weight 0..t_detect, and the converse
/// (no error flag within warranty means no error). The error mask is
/// cw_i XOR cw_o over the whole codeword.
std::vector<Property> build_core_properties(const Circuit& wrapper, const CodeSpec& spec);

struct LemmaOptions {
    /// Break L2 so that it is falsifiable (tests degraded plans).
    bool mutate_l2 = false;
};

/// L1 syndrome of an encoded word is zero; L2 syndrome is linear; L3 the
/// syndrome of an encoded word plus a mask equals the syndrome of the mask.
std::vector<Property> build_linearity_lemmas(const Circuit& syn, const CodeSpec& spec, LemmaOptions opts = {});

inline const std::vector<std::string> kLinearityLemmaNames{"L1_null_syndrome", "L2_linearity", "L3_position_only"};

/// Data pinned to `fixed_data` (constraint) plus detection targets for weights
/// 0..t_detect and correction targets for weights 0..t_correct; all depend on L1-L3.
std::vector<Property> build_reduced_targets(const Circuit& wrapper, const CodeSpec& spec, const BitVec& fixed_data);

/// Same targets without pinning the data.
std::vector<Property> build_detection_correction_targets(const Circuit& wrapper, const CodeSpec& spec);

/// C1: decoder only started from IDLE. C2: decoder never started while an
/// encoder transaction is in flight.
std::vector<Property> build_sequential_assumptions(const Circuit& seq);

inline const std::string kConstraintIdleStart = "C1_dec_start_from_idle";
inline const std::string kConstraintNoOverlap = "C2_no_enc_dec_overlap";

struct EquivalenceMap {
    std::string accept;
    std::size_t latency = 0;
    /// (model input, sequential input)
    std::vector<std::pair<std::string, std::string>> inputs;
    /// (sequential output, model output)
    std::vector<std::pair<std::string, std::string>> outputs;
};

Property build_equivalence(const std::string& name, const Circuit& seq, std::shared_ptr<const Circuit> model,
                           const EquivalenceMap& map);

/// Sequential encoder (core or pipeline()) versus a combinational encoder:
/// an accepted transaction's cw_o, `latency` cycles later, equals model(data_i).
/// Latency is derived from the state port when not given.
Property build_equivalence_property(const Circuit& seq_enc, std::shared_ptr<const Circuit> model_enc,
                                    std::optional<std::size_t> latency = std::nullopt);

inline constexpr std::uint64_t kDefaultSeed = 0x5eed2023u;

/// Deterministic "randomly selected" data word.
BitVec draw_fixed_data(std::size_t k, std::uint64_t seed);

}  // namespace eccprove
