#include "eccprove/property.hpp"

#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"
#include "eccprove/synth.hpp"

namespace eccprove {

namespace ex {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

void need_width(const ExprPtr& e, std::size_t w, const char* what) {
    if (!e) throw InvalidInput(std::string(what) + ": null operand");
    if (e->width != w)
        throw InvalidInput(std::string(what) + ": operand width " + std::to_string(e->width) + ", expected " +
                           std::to_string(w));
}

ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b, const char* what) {
    if (!a || !b) throw InvalidInput(std::string(what) + ": null operand");
    need_width(b, a->width, what);
    Expr e;
    e.kind = k;
    e.width = a->width;
    e.args = {std::move(a), std::move(b)};
    return make(std::move(e));
}

}  // namespace

ExprPtr constant(const BitVec& v) {
    Expr e;
    e.kind = ExprKind::Const;
    e.width = v.size();
    e.value = v;
    return make(std::move(e));
}

ExprPtr bit(bool v) { return constant(BitVec::from_uint(1, v ? 1 : 0)); }

ExprPtr signal(const Circuit& c, const std::string& port, std::size_t offset) {
    Expr e;
    e.kind = ExprKind::Signal;
    e.width = c.port(port).width();
    e.name = port;
    e.offset = offset;
    return make(std::move(e));
}

ExprPtr symbol(const std::string& name, std::size_t width) {
    if (width == 0) throw InvalidInput("symbol: zero width");
    Expr e;
    e.kind = ExprKind::Symbol;
    e.width = width;
    e.name = name;
    return make(std::move(e));
}

ExprPtr lnot(ExprPtr a) {
    if (!a) throw InvalidInput("not: null operand");
    Expr e;
    e.kind = ExprKind::Not;
    e.width = a->width;
    e.args = {std::move(a)};
    return make(std::move(e));
}

ExprPtr land(ExprPtr a, ExprPtr b) { return binary(ExprKind::And, std::move(a), std::move(b), "and"); }
ExprPtr lor(ExprPtr a, ExprPtr b) { return binary(ExprKind::Or, std::move(a), std::move(b), "or"); }
ExprPtr lxor(ExprPtr a, ExprPtr b) { return binary(ExprKind::Xor, std::move(a), std::move(b), "xor"); }

ExprPtr all(const std::vector<ExprPtr>& xs) {
    if (xs.empty()) return bit(true);
    ExprPtr acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) acc = land(acc, xs[i]);
    return acc;
}

ExprPtr any(const std::vector<ExprPtr>& xs) {
    if (xs.empty()) return bit(false);
    ExprPtr acc = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) acc = lor(acc, xs[i]);
    return acc;
}

ExprPtr implies(ExprPtr a, ExprPtr b) {
    need_width(a, 1, "implies");
    need_width(b, 1, "implies");
    Expr e;
    e.kind = ExprKind::Implies;
    e.width = 1;
    e.args = {std::move(a), std::move(b)};
    return make(std::move(e));
}

ExprPtr eq(ExprPtr a, ExprPtr b) {
    auto r = binary(ExprKind::Eq, std::move(a), std::move(b), "eq");
    Expr e = *r;
    e.width = 1;
    return make(std::move(e));
}

ExprPtr one_hot(ExprPtr a) {
    if (!a || a->width == 0) throw InvalidInput("one_hot: empty operand");
    Expr e;
    e.kind = ExprKind::OneHot;
    e.width = 1;
    e.args = {std::move(a)};
    return make(std::move(e));
}

namespace {

ExprPtr weight_atom(ExprKind k, ExprPtr a, std::size_t w) {
    if (!a) throw InvalidInput("weight: null operand");
    if (w > a->width)
        throw InvalidInput("weight bound " + std::to_string(w) + " exceeds vector width " + std::to_string(a->width));
    Expr e;
    e.kind = k;
    e.width = 1;
    e.bound = w;
    e.args = {std::move(a)};
    return make(std::move(e));
}

}  // namespace

ExprPtr weight_eq(ExprPtr a, std::size_t w) { return weight_atom(ExprKind::WeightEq, std::move(a), w); }
ExprPtr weight_le(ExprPtr a, std::size_t w) { return weight_atom(ExprKind::WeightLe, std::move(a), w); }

ExprPtr apply(std::shared_ptr<const Circuit> fn, const std::string& port, std::vector<ExprPtr> args) {
    if (!fn) throw InvalidInput("apply: null function");
    if (!fn->is_combinational()) throw InvalidInput("apply: function circuit must be combinational");
    const Port* out = fn->find_output(port);
    if (!out) throw InvalidInput("apply: " + fn->name() + " has no output " + port);
    if (args.size() != fn->inputs().size())
        throw InvalidInput("apply: " + fn->name() + " takes " + std::to_string(fn->inputs().size()) + " arguments");
    for (std::size_t i = 0; i < args.size(); ++i) need_width(args[i], fn->inputs()[i].width(), "apply");
    Expr e;
    e.kind = ExprKind::Apply;
    e.width = out->width();
    e.name = port;
    e.fn = std::move(fn);
    e.args = std::move(args);
    return make(std::move(e));
}

ExprPtr concat(std::vector<ExprPtr> args) {
    Expr e;
    e.kind = ExprKind::Concat;
    for (const auto& a : args) {
        if (!a) throw InvalidInput("concat: null operand");
        e.width += a->width;
    }
    e.args = std::move(args);
    return make(std::move(e));
}

ExprPtr slice(ExprPtr a, std::size_t lo, std::size_t count) {
    if (!a || lo + count > a->width || count == 0) throw InvalidInput("slice: out of range");
    Expr e;
    e.kind = ExprKind::Slice;
    e.width = count;
    e.offset = lo;
    e.args = {std::move(a)};
    return make(std::move(e));
}

}  // namespace ex

std::size_t max_offset(const ExprPtr& e) {
    std::size_t m = e->kind == ExprKind::Signal ? e->offset : 0;
    for (const auto& a : e->args) m = std::max(m, max_offset(a));
    return m;
}

std::string to_prefix(const ExprPtr& e) {
    auto args = [&](const char* head, const std::string& extra = {}) {
        std::string s = std::string("(") + head;
        for (const auto& a : e->args) s += " " + to_prefix(a);
        return s + extra + ")";
    };
    switch (e->kind) {
        case ExprKind::Const: return e->width == 1 ? (e->value.get(0) ? "1" : "0") : "#b" + e->value.to_string();
        case ExprKind::Signal: return e->name + "@" + std::to_string(e->offset);
        case ExprKind::Symbol: return "$" + e->name + ":" + std::to_string(e->width);
        case ExprKind::Not: return args("not");
        case ExprKind::And: return args("and");
        case ExprKind::Or: return args("or");
        case ExprKind::Xor: return args("xor");
        case ExprKind::Implies: return args("implies");
        case ExprKind::Eq: return args("eq");
        case ExprKind::OneHot: return args("onehot");
        case ExprKind::WeightEq: return args("weight=", " " + std::to_string(e->bound));
        case ExprKind::WeightLe: return args("weight<=", " " + std::to_string(e->bound));
        case ExprKind::Apply: return args((e->fn->name() + "." + e->name).c_str());
        case ExprKind::Concat: return args("concat");
        case ExprKind::Slice: return args("slice", " " + std::to_string(e->offset) + " " + std::to_string(e->width));
    }
    return "?";
}

void check_expr(const ExprPtr& e, const Circuit& c) {
    if (e->kind == ExprKind::Signal) {
        if (!c.has_port(e->name)) throw InvalidInput("property references unknown port " + e->name);
        if (c.port(e->name).width() != e->width)
            throw InvalidInput("property port " + e->name + " width mismatch");
    }
    for (const auto& a : e->args) check_expr(a, c);
}

BitVec evaluate(const ExprPtr& e, const SignalLookup& signals, std::size_t frame,
                const std::map<std::string, BitVec>& symbols) {
    auto arg = [&](std::size_t i) { return evaluate(e->args[i], signals, frame, symbols); };
    auto boolean = [](bool b) { return BitVec::from_uint(1, b ? 1 : 0); };
    switch (e->kind) {
        case ExprKind::Const: return e->value;
        case ExprKind::Signal: return signals(e->name, frame + e->offset);
        case ExprKind::Symbol: {
            const auto it = symbols.find(e->name);
            return it == symbols.end() ? BitVec(e->width) : it->second;
        }
        case ExprKind::Not: {
            BitVec v = arg(0);
            for (std::size_t i = 0; i < v.size(); ++i) v.flip(i);
            return v;
        }
        case ExprKind::And: return arg(0) & arg(1);
        case ExprKind::Xor: return arg(0) ^ arg(1);
        case ExprKind::Or: {
            BitVec a = arg(0);
            const BitVec b = arg(1);
            for (std::size_t i = 0; i < a.size(); ++i)
                if (b.get(i)) a.set(i);
            return a;
        }
        case ExprKind::Implies: return boolean(!arg(0).get(0) || arg(1).get(0));
        case ExprKind::Eq: return boolean(arg(0) == arg(1));
        case ExprKind::OneHot: return boolean(arg(0).weight() == 1);
        case ExprKind::WeightEq: return boolean(arg(0).weight() == e->bound);
        case ExprKind::WeightLe: return boolean(arg(0).weight() <= e->bound);
        case ExprKind::Apply: {
            Assignment in;
            for (std::size_t i = 0; i < e->args.size(); ++i) in[e->fn->inputs()[i].name] = arg(i);
            return eval_comb(*e->fn, in).at(e->name);
        }
        case ExprKind::Concat: {
            BitVec out(e->width);
            std::size_t at = 0;
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                const BitVec v = arg(i);
                for (std::size_t j = 0; j < v.size(); ++j) out.set(at + j, v.get(j));
                at += v.size();
            }
            return out;
        }
        case ExprKind::Slice: return arg(0).slice(e->offset, e->width);
    }
    throw InvalidInput("evaluate: unknown expression kind");
}

const char* to_string(PropertyKind k) { return k == PropertyKind::Assert ? "assert" : "assume"; }

const char* to_string(PropertyRole r) {
    switch (r) {
        case PropertyRole::Target: return "target";
        case PropertyRole::Lemma: return "lemma";
        case PropertyRole::Constraint: return "constraint";
    }
    return "?";
}

Property make_target(std::string name, ExprPtr expr, std::string note) {
    return {std::move(name), PropertyKind::Assert, PropertyRole::Target, std::move(expr), std::nullopt, std::move(note), {}};
}

Property make_lemma(std::string name, ExprPtr expr, std::string note) {
    return {std::move(name), PropertyKind::Assert, PropertyRole::Lemma, std::move(expr), std::nullopt, std::move(note), {}};
}

Property make_constraint(std::string name, ExprPtr expr, std::string note) {
    return {std::move(name), PropertyKind::Assume, PropertyRole::Constraint, std::move(expr), std::nullopt,
            std::move(note), {}};
}

void VerificationPlan::validate() const {
    if (!system) throw InvalidInput("plan: no system circuit");
    std::map<std::string, const Property*> earlier;
    for (const auto& p : properties) {
        if (!p.expr || p.expr->width != 1) throw InvalidInput("plan: property " + p.name + " is not a 1-bit formula");
        if ((p.role == PropertyRole::Constraint) != (p.kind == PropertyKind::Assume))
            throw InvalidInput("plan: " + p.name + ": constraints are assumptions and only constraints are");
        if (earlier.count(p.name)) throw InvalidInput("plan: duplicate property name " + p.name);
        check_expr(p.expr, *system);
        for (const auto& d : p.depends_on) {
            const auto it = earlier.find(d);
            if (it == earlier.end())
                throw InvalidInput("plan: " + p.name + " depends on " + d + ", which is not an earlier property");
            if (it->second->role != PropertyRole::Lemma)
                throw InvalidInput("plan: " + p.name + " depends on non-lemma " + d);
        }
        earlier[p.name] = &p;
    }
}

const Property* VerificationPlan::find(const std::string& name) const {
    for (const auto& p : properties)
        if (p.name == name) return &p;
    return nullptr;
}

nlohmann::json to_json(const Property& p) {
    nlohmann::json j{{"name", p.name},
                     {"kind", to_string(p.kind)},
                     {"role", to_string(p.role)},
                     {"depends_on", p.depends_on},
                     {"expr", to_prefix(p.expr)}};
    if (p.max_weight) j["max_weight"] = *p.max_weight;
    if (!p.note.empty()) j["note"] = p.note;
    return j;
}

nlohmann::json to_json(const VerificationPlan& plan) {
    nlohmann::json props = nlohmann::json::array();
    for (const auto& p : plan.properties) props.push_back(to_json(p));
    return {{"system", plan.system ? plan.system->name() : ""}, {"properties", props}};
}

// ---------------------------------------------------------------------------

namespace {

void require_ports(const Circuit& c, const std::vector<std::string>& names, const char* what) {
    for (const auto& n : names)
        if (!c.has_port(n)) throw InvalidInput(std::string(what) + ": missing port " + n);
}

ExprPtr flag_vector(const Circuit& w, const CodeSpec& spec) {
    std::vector<ExprPtr> flags;
    for (const auto& n : decoder_flag_names(spec)) flags.push_back(ex::signal(w, n));
    return ex::concat(flags);
}

ExprPtr error_mask(const Circuit& w) { return ex::lxor(ex::signal(w, "cw_i"), ex::signal(w, "cw_o")); }

std::vector<std::string> wrapper_ports(const CodeSpec& spec) {
    std::vector<std::string> names{"data_i", "cw_o", "cw_i", "data_o", "ecc_o"};
    for (const auto& n : decoder_flag_names(spec)) names.push_back(n);
    return names;
}

Property detection_target(const Circuit& w, const CodeSpec& spec, std::size_t weight) {
    const auto names = decoder_flag_names(spec);
    Property p = make_target("detect_w" + std::to_string(weight),
                             ex::implies(ex::weight_eq(error_mask(w), weight), ex::signal(w, names[weight])),
                             weight == 0 ? "valid codeword raises no_err" : "weight-" + std::to_string(weight) +
                                                                                " mask raises " + names[weight]);
    p.max_weight = weight;
    return p;
}

}  // namespace

std::vector<Property> build_core_properties(const Circuit& w, const CodeSpec& spec) {
    require_ports(w, wrapper_ports(spec), "build_core_properties");
    std::vector<Property> out;
    out.push_back(make_target("flags_one_hot", ex::one_hot(flag_vector(w, spec)),
                              "exactly one of no_err, err_1.. is raised"));
    for (std::size_t wt = 0; wt <= spec.t_detect; ++wt) out.push_back(detection_target(w, spec, wt));

    std::vector<ExprPtr> errs;
    const auto names = decoder_flag_names(spec);
    for (std::size_t i = 1; i < names.size(); ++i) errs.push_back(ex::signal(w, names[i]));
    Property conv = make_target(
        "no_flag_means_clean",
        ex::implies(ex::land(ex::weight_le(error_mask(w), spec.t_detect), ex::lnot(ex::any(errs))),
                    ex::eq(ex::signal(w, "cw_i"), ex::signal(w, "cw_o"))),
        "within warranty, all error flags low implies an error-free codeword");
    conv.max_weight = spec.t_detect;
    out.push_back(std::move(conv));
    return out;
}

std::vector<Property> build_linearity_lemmas(const Circuit& syn, const CodeSpec& spec, LemmaOptions opts) {
    const Port* in = syn.find_input("cw_i");
    const Port* so = syn.find_output("syn_o");
    if (!in || !so || in->width() != spec.n || so->width() != spec.r)
        throw InvalidInput("build_linearity_lemmas: syndrome circuit must map cw_i[n] to syn_o[r]");
    auto syn_fn = std::make_shared<const Circuit>(syn);
    auto enc_fn = std::make_shared<const Circuit>(synth_encoder(spec));
    auto S = [&](ExprPtr x) { return ex::apply(syn_fn, "syn_o", {std::move(x)}); };
    auto Enc = [&](ExprPtr d) { return ex::apply(enc_fn, "cw_o", {std::move(d)}); };
    const BitVec zero(spec.r);

    const auto d = ex::symbol("d", spec.k);
    const auto x = ex::symbol("x", spec.n);
    const auto y = ex::symbol("y", spec.n);
    const auto m = ex::symbol("m", spec.n);

    std::vector<Property> out;
    out.push_back(make_lemma(kLinearityLemmaNames[0], ex::eq(S(Enc(d)), ex::constant(zero)),
                             "syndrome of every encoded word is the null vector"));
    ExprPtr rhs = opts.mutate_l2 ? S(ex::lor(x, y)) : S(ex::lxor(x, y));
    out.push_back(make_lemma(kLinearityLemmaNames[1], ex::eq(ex::lxor(S(x), S(y)), rhs),
                             opts.mutate_l2 ? "mutated: XOR replaced by OR on the right-hand side"
                                            : "syn(x) ^ syn(y) == syn(x ^ y)"));
    out.push_back(make_lemma(kLinearityLemmaNames[2], ex::eq(S(ex::lxor(Enc(d), m)), S(m)),
                             "syndrome depends only on the error positions, not on the data"));
    return out;
}

std::vector<Property> build_detection_correction_targets(const Circuit& w, const CodeSpec& spec) {
    require_ports(w, wrapper_ports(spec), "build_detection_correction_targets");
    std::vector<Property> out;
    for (std::size_t wt = 0; wt <= spec.t_detect; ++wt) out.push_back(detection_target(w, spec, wt));
    for (std::size_t wt = 0; wt <= spec.t_correct; ++wt) {
        Property p = make_target("correct_w" + std::to_string(wt),
                                 ex::implies(ex::weight_eq(error_mask(w), wt),
                                             ex::eq(ex::signal(w, "data_o"), ex::signal(w, "data_i"))),
                                 "weight-" + std::to_string(wt) + " mask is corrected");
        p.max_weight = wt;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Property> build_reduced_targets(const Circuit& w, const CodeSpec& spec, const BitVec& fixed_data) {
    if (fixed_data.size() != spec.k) throw InvalidInput("build_reduced_targets: fixed data width != k");
    std::vector<Property> out;
    out.push_back(make_constraint("fixed_data", ex::eq(ex::signal(w, "data_i"), ex::constant(fixed_data)),
                                  "data_i pinned to " + fixed_data.to_hex()));
    for (auto& p : build_detection_correction_targets(w, spec)) {
        if (p.name.rfind("correct_", 0) == 0)
            p.expr = ex::implies(p.expr->args[0], ex::eq(ex::signal(w, "data_o"), ex::constant(fixed_data)));
        p.depends_on = kLinearityLemmaNames;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Property> build_sequential_assumptions(const Circuit& seq) {
    require_ports(seq, {"enc_start_i", "dec_start_i", "rst_n_i", "dec_state_o", "enc_state_o"},
                  "build_sequential_assumptions");
    const std::size_t dw = seq.port("dec_state_o").width();
    const std::size_t ew = seq.port("enc_state_o").width();
    std::vector<Property> out;
    out.push_back(make_constraint(kConstraintIdleStart,
                                  ex::implies(ex::signal(seq, "dec_start_i"),
                                              ex::eq(ex::signal(seq, "dec_state_o"), ex::constant(BitVec::unit(dw, 0)))),
                                  "decoder starts from the IDLE state"));
    out.push_back(make_constraint(
        kConstraintNoOverlap,
        ex::implies(ex::signal(seq, "dec_start_i"),
                    ex::eq(ex::slice(ex::signal(seq, "enc_state_o"), 1, ew - 1), ex::constant(BitVec(ew - 1)))),
        "encoding and decoding stages do not overlap"));
    return out;
}

Property build_equivalence(const std::string& name, const Circuit& seq, std::shared_ptr<const Circuit> model,
                           const EquivalenceMap& map) {
    if (!model || !model->is_combinational()) throw InvalidInput("equivalence: model must be combinational");
    std::vector<ExprPtr> args;
    for (const auto& in : model->inputs()) {
        auto it = std::find_if(map.inputs.begin(), map.inputs.end(), [&](const auto& p) { return p.first == in.name; });
        if (it == map.inputs.end()) throw InvalidInput("equivalence: model input " + in.name + " is not mapped");
        auto s = ex::signal(seq, it->second, 0);
        if (s->width != in.width())
            throw InvalidInput("equivalence: width mismatch between " + it->second + " and model " + in.name);
        args.push_back(std::move(s));
    }
    std::vector<ExprPtr> lhs, rhs;
    for (const auto& [sname, mname] : map.outputs) {
        auto s = ex::signal(seq, sname, map.latency);
        auto m = ex::apply(model, mname, args);
        if (s->width != m->width) throw InvalidInput("equivalence: width mismatch on " + sname);
        lhs.push_back(std::move(s));
        rhs.push_back(std::move(m));
    }
    std::vector<ExprPtr> pre{ex::signal(seq, map.accept, 0)};
    if (seq.has_port("rst_n_i"))
        for (std::size_t f = 1; f <= map.latency; ++f) pre.push_back(ex::signal(seq, "rst_n_i", f));
    return make_target(name, ex::implies(ex::all(pre), ex::eq(ex::concat(lhs), ex::concat(rhs))),
                       "accepted transaction without reset in flight matches the combinational model " +
                           std::to_string(map.latency) + " cycles later");
}

Property build_equivalence_property(const Circuit& seq, std::shared_ptr<const Circuit> model,
                                    std::optional<std::size_t> latency) {
    const bool core = seq.has_port("enc_accept_o");
    EquivalenceMap m;
    m.accept = core ? "enc_accept_o" : "accept_o";
    const std::string state = core ? "enc_state_o" : "state_o";
    if (!seq.has_port(m.accept) || !seq.has_port(state) || !seq.has_port("cw_o") || !seq.has_port("data_i"))
        throw InvalidInput("build_equivalence_property: sequential encoder ports missing");
    m.latency = latency ? *latency : seq.port(state).width() - 1;
    m.inputs = {{"data_i", "data_i"}};
    m.outputs = {{"cw_o", "cw_o"}};
    return build_equivalence("enc_equivalence", seq, std::move(model), m);
}

BitVec draw_fixed_data(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BitVec v(k);
    for (std::size_t i = 0; i < k; ++i) v.set(i, rng() & 1u);
    return v;
}

}  // namespace eccprove
