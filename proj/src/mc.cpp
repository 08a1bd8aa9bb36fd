#include "eccprove/mc.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iterator>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"

namespace eccprove::mc {

CnfBuilder::CnfBuilder(sat::Solver& solver) : solver_(solver) {
    true_ = sat::pos(solver_.new_var());
    solver_.add_clause({true_});
}

Lit CnfBuilder::fresh() { return sat::pos(solver_.new_var()); }

void CnfBuilder::add_clause(std::initializer_list<Lit> c) { solver_.add_clause(c); }
void CnfBuilder::add_clause(const std::vector<Lit>& c) { solver_.add_clause(std::span<const Lit>(c)); }

Lit CnfBuilder::and2(Lit a, Lit b) {
    const Lit f = ~true_;
    if (a == f || b == f || a == ~b) return f;
    if (a == true_ || a == b) return b;
    if (b == true_) return a;
    if (b < a) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a.index()) << 32) | b.index();
    if (auto it = and_cache_.find(key); it != and_cache_.end()) return it->second;
    const Lit g = fresh();
    solver_.add_clause({~g, a});
    solver_.add_clause({~g, b});
    solver_.add_clause({g, ~a, ~b});
    gate_clauses_ += 3;
    return and_cache_[key] = g;
}

CnfBuilder::LinearForm CnfBuilder::form_of(Lit l) const {
    LinearForm f;
    if (auto it = forms_.find(l.var()); it != forms_.end()) {
        f = it->second;
    } else {
        f.support = {l.var()};
    }
    f.constant = f.constant != l.negated();
    return f;
}

Lit CnfBuilder::xor2(Lit a, Lit b) {
    if (is_const(a)) return a == true_ ? ~b : b;
    if (is_const(b)) return b == true_ ? ~a : a;
    if (a == b) return ~true_;
    if (a == ~b) return true_;

    const LinearForm fa = form_of(a), fb = form_of(b);
    LinearForm f;
    std::set_symmetric_difference(fa.support.begin(), fa.support.end(), fb.support.begin(), fb.support.end(),
                                  std::back_inserter(f.support));
    f.constant = fa.constant != fb.constant;
    const bool linear = f.support.size() <= kMaxLinearSupport;
    if (linear) {
        if (f.support.empty()) return constant(f.constant);
        if (f.support.size() == 1 && !forms_.count(f.support[0])) return sat::Lit(f.support[0], f.constant);
        if (auto it = by_form_.find(f.support); it != by_form_.end())
            return it->second.second != f.constant ? ~it->second.first : it->second.first;
    }

    const bool flip = a.negated() != b.negated();
    a = sat::pos(a.var());
    b = sat::pos(b.var());
    if (b < a) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a.index()) << 32) | b.index();
    Lit g;
    if (auto it = xor_cache_.find(key); it != xor_cache_.end()) {
        g = it->second;
    } else {
        g = fresh();
        solver_.add_clause({~g, a, b});
        solver_.add_clause({~g, ~a, ~b});
        solver_.add_clause({g, ~a, b});
        solver_.add_clause({g, a, ~b});
        gate_clauses_ += 4;
        xor_cache_[key] = g;
        if (linear) {
            // g == a ^ b over positive literals; its constant is f's without the operand polarities.
            LinearForm gf{f.support, f.constant != flip};
            by_form_.emplace(gf.support, std::make_pair(g, gf.constant));
            forms_.emplace(g.var(), std::move(gf));
        }
    }
    return flip ? ~g : g;
}

Lit CnfBuilder::mux(Lit sel, Lit t, Lit e) { return or2(and2(sel, t), and2(~sel, e)); }

Lit CnfBuilder::and_all(const std::vector<Lit>& xs) {
    Lit acc = true_;
    for (Lit x : xs) acc = and2(acc, x);
    return acc;
}

Lit CnfBuilder::or_all(const std::vector<Lit>& xs) {
    Lit acc = ~true_;
    for (Lit x : xs) acc = or2(acc, x);
    return acc;
}

Lit CnfBuilder::equal(const std::vector<Lit>& a, const std::vector<Lit>& b) {
    if (a.size() != b.size()) throw InvalidInput("equal: width mismatch");
    std::vector<Lit> same;
    for (std::size_t i = 0; i < a.size(); ++i) same.push_back(~xor2(a[i], b[i]));
    return and_all(same);
}

std::vector<Lit> CnfBuilder::at_least(const std::vector<Lit>& xs, std::size_t upto) {
    std::vector<Lit> s(upto, ~true_);
    for (Lit x : xs)
        for (std::size_t j = upto; j-- > 0;) s[j] = or2(s[j], j == 0 ? x : and2(x, s[j - 1]));
    return s;
}

Lit CnfBuilder::weight_eq(const std::vector<Lit>& xs, std::size_t w) {
    const auto s = at_least(xs, w + 1);
    return w == 0 ? ~s[0] : and2(s[w - 1], ~s[w]);
}

Lit CnfBuilder::weight_le(const std::vector<Lit>& xs, std::size_t w) { return ~at_least(xs, w + 1)[w]; }

Lit CnfBuilder::one_hot(const std::vector<Lit>& xs) { return weight_eq(xs, 1); }

// ---------------------------------------------------------------------------

std::vector<Lit> tseitin_encode(const Circuit& c, CnfBuilder& b, const std::map<std::string, std::vector<Lit>>& inputs,
                                const std::vector<Lit>& state) {
    if (!state.empty() && state.size() != c.registers().size())
        throw InvalidInput("tseitin_encode: state width != register count");
    std::vector<std::size_t> bit_of(c.nodes().size(), 0);
    for (const auto& p : c.inputs())
        for (std::size_t i = 0; i < p.bits.size(); ++i) bit_of[p.bits[i]] = i;

    std::vector<Lit> lit(c.nodes().size());
    for (NodeId v = 0; v < c.nodes().size(); ++v) {
        const Node& n = c.node(v);
        switch (n.op) {
            case Op::Const0: lit[v] = b.constant(false); break;
            case Op::Const1: lit[v] = b.constant(true); break;
            case Op::Input: {
                const Port& p = c.inputs()[n.a];
                const auto it = inputs.find(p.name);
                if (it == inputs.end()) {
                    lit[v] = b.fresh();
                } else {
                    if (it->second.size() != p.width()) throw InvalidInput("tseitin_encode: width mismatch on " + p.name);
                    lit[v] = it->second[bit_of[v]];
                }
                break;
            }
            case Op::Reg: lit[v] = state.empty() ? b.fresh() : state[n.a]; break;
            case Op::Not: {
                // Own variable with two clauses so every gate has a named literal.
                const Lit g = b.fresh();
                b.add_clause({g, lit[n.a]});
                b.add_clause({~g, ~lit[n.a]});
                lit[v] = g;
                break;
            }
            case Op::And: lit[v] = b.and2(lit[n.a], lit[n.b]); break;
            case Op::Xor: lit[v] = b.xor2(lit[n.a], lit[n.b]); break;
        }
    }
    return lit;
}

Unroller::Unroller(const Circuit& c, CnfBuilder& b, bool from_reset) : c_(c), b_(b) {
    std::vector<Lit> s;
    if (from_reset)
        for (const auto& r : c.registers()) s.push_back(b.constant(r.init));
    frames_.push_back(tseitin_encode(c, b, {}, s));
}

void Unroller::extend_to(std::size_t count) {
    while (frames_.size() < count) {
        const auto& prev = frames_.back();
        std::vector<Lit> s;
        for (const auto& r : c_.registers()) s.push_back(prev[r.next]);
        frames_.push_back(tseitin_encode(c_, b_, {}, s));
    }
}

std::vector<Lit> Unroller::port(const std::string& name, std::size_t frame) const {
    std::vector<Lit> out;
    for (auto bit : c_.port(name).bits) out.push_back(frames_.at(frame)[bit]);
    return out;
}

std::vector<Lit> Unroller::state(std::size_t frame) const {
    std::vector<Lit> out;
    for (const auto& r : c_.registers()) out.push_back(frames_.at(frame)[r.node]);
    return out;
}

std::vector<Lit> encode_expr(const ExprPtr& e, Unroller& u, CnfBuilder& b, std::size_t frame,
                             std::map<std::string, std::vector<Lit>>& symbols) {
    auto arg = [&](std::size_t i) { return encode_expr(e->args[i], u, b, frame, symbols); };
    auto bitwise = [&](auto op) {
        const auto x = arg(0), y = arg(1);
        std::vector<Lit> out;
        for (std::size_t i = 0; i < x.size(); ++i) out.push_back(op(x[i], y[i]));
        return out;
    };
    switch (e->kind) {
        case ExprKind::Const: {
            std::vector<Lit> out;
            for (std::size_t i = 0; i < e->width; ++i) out.push_back(b.constant(e->value.get(i)));
            return out;
        }
        case ExprKind::Signal:
            u.extend_to(frame + e->offset + 1);
            return u.port(e->name, frame + e->offset);
        case ExprKind::Symbol: {
            auto& v = symbols[e->name];
            if (v.empty())
                for (std::size_t i = 0; i < e->width; ++i) v.push_back(b.fresh());
            if (v.size() != e->width) throw InvalidInput("symbol " + e->name + " used with two widths");
            return v;
        }
        case ExprKind::Not: {
            auto v = arg(0);
            for (auto& l : v) l = ~l;
            return v;
        }
        case ExprKind::And: return bitwise([&](Lit x, Lit y) { return b.and2(x, y); });
        case ExprKind::Or: return bitwise([&](Lit x, Lit y) { return b.or2(x, y); });
        case ExprKind::Xor: return bitwise([&](Lit x, Lit y) { return b.xor2(x, y); });
        case ExprKind::Implies: return {b.or2(~arg(0)[0], arg(1)[0])};
        case ExprKind::Eq: return {b.equal(arg(0), arg(1))};
        case ExprKind::OneHot: return {b.one_hot(arg(0))};
        case ExprKind::WeightEq: return {b.weight_eq(arg(0), e->bound)};
        case ExprKind::WeightLe: return {b.weight_le(arg(0), e->bound)};
        case ExprKind::Apply: {
            std::map<std::string, std::vector<Lit>> in;
            for (std::size_t i = 0; i < e->args.size(); ++i) in[e->fn->inputs()[i].name] = arg(i);
            const auto lits = tseitin_encode(*e->fn, b, in);
            std::vector<Lit> out;
            for (auto bit : e->fn->port(e->name).bits) out.push_back(lits[bit]);
            return out;
        }
        case ExprKind::Concat: {
            std::vector<Lit> out;
            for (std::size_t i = 0; i < e->args.size(); ++i) {
                const auto v = arg(i);
                out.insert(out.end(), v.begin(), v.end());
            }
            return out;
        }
        case ExprKind::Slice: {
            const auto v = arg(0);
            return {v.begin() + static_cast<std::ptrdiff_t>(e->offset),
                    v.begin() + static_cast<std::ptrdiff_t>(e->offset + e->width)};
        }
    }
    throw InvalidInput("encode_expr: unknown expression kind");
}

Lit encode_property(const ExprPtr& e, Unroller& u, CnfBuilder& b, std::size_t frame,
                    std::map<std::string, std::vector<Lit>>* symbols) {
    if (e->width != 1) throw InvalidInput("encode_property: formula must be 1 bit wide");
    std::map<std::string, std::vector<Lit>> local;
    return encode_expr(e, u, b, frame, symbols ? *symbols : local)[0];
}

// ---------------------------------------------------------------------------

namespace {

bool value_of(const std::vector<bool>& model, Lit l) { return model[l.var()] != l.negated(); }

BitVec values_of(const std::vector<bool>& model, const std::vector<Lit>& lits) {
    BitVec v(lits.size());
    for (std::size_t i = 0; i < lits.size(); ++i) v.set(i, value_of(model, lits[i]));
    return v;
}

Trace extract_trace(const Unroller& u, const std::vector<bool>& model, std::size_t frames,
                    const std::map<std::string, std::vector<Lit>>& symbols) {
    Trace t;
    const Circuit& c = u.circuit();
    for (std::size_t f = 0; f < frames; ++f) {
        t.states.push_back(values_of(model, u.state(f)));
        Assignment in, out;
        for (const auto& p : c.inputs()) in[p.name] = values_of(model, u.port(p.name, f));
        for (const auto& p : c.outputs()) out[p.name] = values_of(model, u.port(p.name, f));
        t.inputs.push_back(std::move(in));
        t.outputs.push_back(std::move(out));
    }
    for (const auto& [name, lits] : symbols) t.symbols[name] = values_of(model, lits);
    return t;
}

void accumulate(sat::Stats& into, const sat::Stats& s) {
    into.conflicts += s.conflicts;
    into.decisions += s.decisions;
    into.propagations += s.propagations;
    into.restarts += s.restarts;
    into.learnt_clauses += s.learnt_clauses;
}

// One unrolling with its own solver; assumptions asserted on every frame that
// fits inside the unrolling.
struct Side {
    Side(const Circuit& c, const EngineConfig& cfg, bool from_reset, const std::vector<Property>& assumptions)
        : solver(sat::SolverOptions{cfg.seed}), builder(solver), unroller(c, builder, from_reset),
          assumptions(assumptions), asserted(assumptions.size(), 0) {}

    void ensure_frames(std::size_t count) {
        unroller.extend_to(count);
        for (std::size_t i = 0; i < assumptions.size(); ++i) {
            const std::size_t off = max_offset(assumptions[i].expr);
            while (asserted[i] + off < count) {
                builder.add_clause({encode_property(assumptions[i].expr, unroller, builder, asserted[i])});
                ++asserted[i];
            }
        }
    }

    sat::Solver solver;
    CnfBuilder builder;
    Unroller unroller;
    const std::vector<Property>& assumptions;
    std::vector<std::size_t> asserted;
};

class Budget {
public:
    explicit Budget(std::uint64_t total) : total_(total) {}
    bool exhausted() const { return total_ != 0 && used_ >= total_; }
    sat::SolveResult solve(sat::Solver& s, std::initializer_list<Lit> assume, sat::Stats& stats) {
        s.set_conflict_budget(total_ == 0 ? 0 : total_ - used_);
        auto r = s.solve(assume);
        used_ += r.stats.conflicts;
        accumulate(stats, r.stats);
        return r;
    }

private:
    std::uint64_t total_;
    std::uint64_t used_ = 0;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Proven: return "proven";
        case Verdict::BoundedPass: return "bounded";
        case Verdict::Cex: return "cex";
        case Verdict::InductionCex: return "induction_cex";
        case Verdict::Unknown: return "unknown";
    }
    return "?";
}

CheckResult bmc(const Circuit& c, const Property& target, const std::vector<Property>& assumptions,
                const EngineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    const std::size_t off = max_offset(target.expr);
    Side base(c, cfg, true, assumptions);
    Budget budget(cfg.conflict_budget);
    for (std::size_t k = 0; k <= cfg.k_max; ++k) {
        res.bound = k;
        base.ensure_frames(k + off + 1);
        std::map<std::string, std::vector<Lit>> syms;
        const Lit p = encode_property(target.expr, base.unroller, base.builder, k, &syms);
        const auto r = budget.solve(base.solver, {~p}, res.stats);
        if (r.status == sat::Status::Sat) {
            res.verdict = Verdict::Cex;
            res.trace = extract_trace(base.unroller, r.model, k + off + 1, syms);
            res.trace->rooted_at_reset = true;
            res.trace->violation_frame = k;
            res.trace->property = target.name;
            res.wall_ms = ms_since(t0);
            return res;
        }
        if (r.status == sat::Status::Unknown) {
            res.verdict = Verdict::Unknown;
            res.detail = "conflict budget exhausted at depth " + std::to_string(k);
            res.wall_ms = ms_since(t0);
            return res;
        }
        if (cfg.progress)
            cfg.progress(target.name + " bmc " + std::to_string(k) + " " + std::to_string(ms_since(t0)) + "ms");
        base.builder.add_clause({p});
    }
    res.verdict = Verdict::BoundedPass;
    res.detail = "no counterexample up to depth " + std::to_string(cfg.k_max) + " (not a proof)";
    res.wall_ms = ms_since(t0);
    return res;
}

sat::Cnf base_query_cnf(const Circuit& c, const Property& target, const std::vector<Property>& assumptions,
                        std::size_t depth) {
    Side base(c, EngineConfig{}, true, assumptions);
    base.ensure_frames(depth + max_offset(target.expr) + 1);
    base.builder.add_clause({~encode_property(target.expr, base.unroller, base.builder, depth)});
    return base.solver.original_cnf();
}

CheckResult k_induction(const Circuit& c, const Property& target, const std::vector<Property>& assumptions,
                        const EngineConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult res;
    const std::size_t off = max_offset(target.expr);
    bool unique = cfg.unique_states;
    for (const auto& a : assumptions)
        if (a.role == PropertyRole::Constraint && max_offset(a.expr) > 0 && unique) {
            unique = false;
            res.detail = "state distinctness disabled: constraint " + a.name + " spans several cycles; ";
        }

    Side base(c, cfg, true, assumptions);
    Side step(c, cfg, false, assumptions);
    Budget budget(cfg.conflict_budget);
    auto finish = [&](Verdict v, std::size_t bound) {
        res.verdict = v;
        res.bound = bound;
        res.wall_ms = ms_since(t0);
        return res;
    };

    std::vector<Lit> step_props;
    for (std::size_t n = 0; n <= cfg.k_max; ++n) {
        // Base_n: I, P_0..P_{n-1}, not P_n.
        base.ensure_frames(n + off + 1);
        std::map<std::string, std::vector<Lit>> bsyms;
        const Lit p = encode_property(target.expr, base.unroller, base.builder, n, &bsyms);
        auto r = budget.solve(base.solver, {~p}, res.stats);
        if (r.status == sat::Status::Sat) {
            res.trace = extract_trace(base.unroller, r.model, n + off + 1, bsyms);
            res.trace->rooted_at_reset = true;
            res.trace->violation_frame = n;
            res.trace->property = target.name;
            return finish(Verdict::Cex, n);
        }
        if (r.status == sat::Status::Unknown) {
            res.detail += "conflict budget exhausted in base case";
            return finish(Verdict::Unknown, n);
        }
        if (cfg.progress)
            cfg.progress(target.name + " base " + std::to_string(n) + " " + std::to_string(ms_since(t0)) + "ms");
        base.builder.add_clause({p});

        // Step_n: P_0..P_n, not P_{n+1}, no initial state.
        step.ensure_frames(n + off + 2);
        if (step_props.empty()) step_props.push_back(encode_property(target.expr, step.unroller, step.builder, 0));
        step.builder.add_clause({step_props[n]});
        if (unique) {
            const auto sn = step.unroller.state(n + 1);
            for (std::size_t j = 0; j <= n; ++j) {
                const auto sj = step.unroller.state(j);
                std::vector<Lit> diff;
                for (std::size_t i = 0; i < sn.size(); ++i) diff.push_back(step.builder.xor2(sn[i], sj[i]));
                step.builder.add_clause(diff);
            }
        }
        std::map<std::string, std::vector<Lit>> ssyms;
        const Lit q = encode_property(target.expr, step.unroller, step.builder, n + 1, &ssyms);
        step_props.push_back(q);
        r = budget.solve(step.solver, {~q}, res.stats);
        if (cfg.progress)
            cfg.progress(target.name + " step " + std::to_string(n) + " " + sat::to_string(r.status) + " " +
                         std::to_string(ms_since(t0)) + "ms");
        if (r.status == sat::Status::Unsat) return finish(Verdict::Proven, n);
        if (r.status == sat::Status::Unknown) {
            res.detail += "conflict budget exhausted in induction step";
            return finish(Verdict::Unknown, n);
        }
        if (n == cfg.k_max) {
            res.trace = extract_trace(step.unroller, r.model, n + off + 2, ssyms);
            res.trace->rooted_at_reset = false;
            res.trace->violation_frame = n + 1;
            res.trace->property = target.name;
            res.detail += "induction step still satisfiable at k_max";
            return finish(Verdict::InductionCex, n);
        }
    }
    return finish(Verdict::Unknown, cfg.k_max);
}

// ---------------------------------------------------------------------------

std::string serialize_trace(const Trace& t, const std::function<std::string(std::size_t)>& annotate) {
    std::ostringstream os;
    os << "eccprove-trace 1\n";
    os << "property " << t.property << '\n';
    os << "rooted_at_reset " << (t.rooted_at_reset ? 1 : 0) << '\n';
    os << "violation_frame " << t.violation_frame << '\n';
    for (const auto& [k, v] : t.meta) os << "meta " << k << ' ' << v << '\n';
    for (const auto& [k, v] : t.symbols) os << "symbol " << k << ' ' << v.to_string() << '\n';
    for (std::size_t i = 0; i < t.length(); ++i) {
        os << "cycle " << i << '\n';
        if (annotate) {
            const std::string a = annotate(i);
            if (!a.empty()) os << "# " << a << '\n';
        }
        os << "state " << (t.states[i].empty() ? "-" : t.states[i].to_string()) << '\n';
        for (const auto& [k, v] : t.inputs[i]) os << "in " << k << ' ' << v.to_string() << '\n';
        for (const auto& [k, v] : t.outputs[i]) os << "out " << k << ' ' << v.to_string() << '\n';
    }
    os << "end\n";
    return os.str();
}

Trace parse_trace(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    Trace t;
    bool header = false, ended = false;
    auto bits = [&](const std::string& s) {
        if (s == "-") return BitVec();
        if (s.find_first_not_of("01") != std::string::npos) throw ParseError(lineno, "bad bit string '" + s + "'");
        return BitVec::from_string(s);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (!header) {
            if (kw != "eccprove-trace") throw ParseError(lineno, "not a trace file");
            header = true;
            continue;
        }
        if (ended) throw ParseError(lineno, "text after 'end'");
        std::string a, b;
        if (kw == "property") {
            ls >> t.property;
        } else if (kw == "rooted_at_reset") {
            int v = 0;
            if (!(ls >> v)) throw ParseError(lineno, "rooted_at_reset needs 0 or 1");
            t.rooted_at_reset = v != 0;
        } else if (kw == "violation_frame") {
            if (!(ls >> t.violation_frame)) throw ParseError(lineno, "violation_frame needs a number");
        } else if (kw == "meta") {
            if (!(ls >> a)) throw ParseError(lineno, "meta needs a key");
            std::getline(ls >> std::ws, b);
            t.meta[a] = b;
        } else if (kw == "symbol") {
            if (!(ls >> a >> b)) throw ParseError(lineno, "symbol needs name and bits");
            t.symbols[a] = bits(b);
        } else if (kw == "cycle") {
            std::size_t i = 0;
            if (!(ls >> i) || i != t.inputs.size()) throw ParseError(lineno, "cycles must be consecutive from 0");
            t.states.emplace_back();
            t.inputs.emplace_back();
            t.outputs.emplace_back();
        } else if (kw == "state" || kw == "in" || kw == "out") {
            if (t.inputs.empty()) throw ParseError(lineno, kw + " before first cycle");
            if (kw == "state") {
                if (!(ls >> a)) throw ParseError(lineno, "state needs bits");
                t.states.back() = bits(a);
            } else {
                if (!(ls >> a >> b)) throw ParseError(lineno, kw + " needs port and bits");
                (kw == "in" ? t.inputs : t.outputs).back()[a] = bits(b);
            }
        } else if (kw == "end") {
            ended = true;
        } else {
            throw ParseError(lineno, "unknown keyword '" + kw + "'");
        }
    }
    if (!header) throw ParseError(1, "empty trace");
    if (!ended) throw ParseError(lineno, "missing 'end'");
    return t;
}

ReplayResult replay(const Circuit& c, const Property& target, const Trace& t) {
    ReplayResult rr;
    if (t.length() == 0) return rr;
    Simulator sim(c);
    if (!c.registers().empty()) sim.set_state(t.states.at(0));
    rr.consistent = true;
    for (std::size_t i = 0; i < t.length(); ++i) {
        rr.outputs.push_back(sim.step(t.inputs[i]));
        if (i < t.outputs.size() && !t.outputs[i].empty() && t.outputs[i] != rr.outputs.back()) rr.consistent = false;
        if (i + 1 < t.states.size() && !c.registers().empty() && sim.state() != t.states[i + 1]) rr.consistent = false;
    }
    const SignalLookup lookup = [&](const std::string& port, std::size_t cycle) -> BitVec {
        if (cycle >= t.length()) throw InvalidInput("replay: trace too short for property offsets");
        if (auto it = t.inputs[cycle].find(port); it != t.inputs[cycle].end()) return it->second;
        return rr.outputs[cycle].at(port);
    };
    rr.violates = !evaluate(target.expr, lookup, t.violation_frame, t.symbols).get(0);
    return rr;
}

// ---------------------------------------------------------------------------

const PropertyReport* Report::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.property == name) return &e;
    return nullptr;
}

bool Report::all_proven() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const PropertyReport& e) { return e.result.verdict == Verdict::Proven; });
}

Report prove_plan(const VerificationPlan& plan, const EngineConfig& cfg) {
    plan.validate();
    const Circuit& sys = *plan.system;
    std::vector<Property> constraints;
    for (const auto& p : plan.properties)
        if (p.role == PropertyRole::Constraint) constraints.push_back(p);

    std::map<std::string, bool> lemma_proven;
    std::map<std::string, const Property*> by_name;
    for (const auto& p : plan.properties) by_name[p.name] = &p;

    auto run = [&](const Property& p) {
        PropertyReport rep;
        rep.property = p.name;
        rep.role = p.role;
        std::vector<Property> assumptions = constraints;
        for (const auto& d : p.depends_on) {
            if (lemma_proven.at(d)) {
                assumptions.push_back(*by_name.at(d));
                rep.assumed.push_back(d);
            } else {
                rep.broken_dependencies.push_back(d);
            }
        }
        rep.result = k_induction(sys, p, assumptions, cfg);
        return rep;
    };

    Report report;
    for (const auto& p : plan.properties) {
        if (p.role != PropertyRole::Lemma) continue;
        report.entries.push_back(run(p));
        lemma_proven[p.name] = report.entries.back().result.verdict == Verdict::Proven;
    }

    std::vector<const Property*> targets;
    for (const auto& p : plan.properties)
        if (p.role == PropertyRole::Target) targets.push_back(&p);
    std::vector<PropertyReport> results(targets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < targets.size();) results[i] = run(*targets[i]);
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, targets.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& r : results) report.entries.push_back(std::move(r));
    return report;
}

nlohmann::json to_json(const PropertyReport& r, bool include_timing) {
    nlohmann::json j{{"property", r.property},
                     {"role", to_string(r.role)},
                     {"status", to_string(r.result.verdict)},
                     {"bound", r.result.bound},
                     {"conflicts", r.result.stats.conflicts},
                     {"decisions", r.result.stats.decisions},
                     {"propagations", r.result.stats.propagations},
                     {"assumed", r.assumed},
                     {"degraded", r.degraded()},
                     {"broken_dependencies", r.broken_dependencies}};
    if (include_timing) j["wall_ms"] = r.result.wall_ms;
    if (!r.result.detail.empty()) j["detail"] = r.result.detail;
    if (r.result.trace)
        j["trace"] = {{"length", r.result.trace->length()},
                      {"rooted_at_reset", r.result.trace->rooted_at_reset},
                      {"violation_frame", r.result.trace->violation_frame}};
    return j;
}

}  // namespace eccprove::mc
