#include "eccprove/circuit.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "eccprove/error.hpp"

namespace eccprove {

const char* to_string(Op op) {
    switch (op) {
        case Op::Const0: return "CONST0";
        case Op::Const1: return "CONST1";
        case Op::Input: return "INPUT";
        case Op::Reg: return "REG";
        case Op::Not: return "NOT";
        case Op::And: return "AND";
        case Op::Xor: return "XOR";
    }
    return "?";
}

namespace {

Op op_from_string(const std::string& s, std::size_t line) {
    for (Op op : {Op::Const0, Op::Const1, Op::Input, Op::Reg, Op::Not, Op::And, Op::Xor})
        if (s == to_string(op)) return op;
    throw ParseError(line, "unknown node op '" + s + "'");
}

std::uint64_t strash_key(Op op, NodeId a, NodeId b) {
    return (static_cast<std::uint64_t>(op) << 60) | (static_cast<std::uint64_t>(a) << 30) | b;
}

}  // namespace

Circuit::Circuit(std::string name) : name_(std::move(name)) {
    nodes_.push_back({Op::Const0, 0, 0});
    nodes_.push_back({Op::Const1, 0, 0});
}

NodeId Circuit::push(Node n) {
    nodes_.push_back(n);
    return static_cast<NodeId>(nodes_.size() - 1);
}

void Circuit::check_ref(NodeId id) const {
    if (id >= nodes_.size()) throw InvalidInput("dangling node reference " + std::to_string(id));
}

void Circuit::check_new_port_name(const std::string& name) const {
    if (name.empty()) throw InvalidInput("empty port name");
    if (has_port(name)) throw InvalidInput("duplicate port name '" + name + "'");
}

std::vector<NodeId> Circuit::add_input(const std::string& name, std::size_t width) {
    check_new_port_name(name);
    Port p{name, {}};
    for (std::size_t i = 0; i < width; ++i) p.bits.push_back(push({Op::Input, static_cast<NodeId>(inputs_.size()), 0}));
    inputs_.push_back(p);
    return p.bits;
}

void Circuit::add_output(const std::string& name, std::vector<NodeId> bits) {
    check_new_port_name(name);
    for (auto b : bits) check_ref(b);
    outputs_.push_back({name, std::move(bits)});
}

NodeId Circuit::add_not(NodeId a) {
    check_ref(a);
    if (a == kFalse) return kTrue;
    if (a == kTrue) return kFalse;
    if (nodes_[a].op == Op::Not) return nodes_[a].a;
    const auto key = strash_key(Op::Not, a, 0);
    if (auto it = strash_.find(key); it != strash_.end()) return it->second;
    return strash_[key] = push({Op::Not, a, 0});
}

NodeId Circuit::add_and(NodeId a, NodeId b) {
    check_ref(a);
    check_ref(b);
    if (a > b) std::swap(a, b);
    if (a == kFalse) return kFalse;
    if (a == kTrue) return b;
    if (a == b) return a;
    if ((nodes_[b].op == Op::Not && nodes_[b].a == a) || (nodes_[a].op == Op::Not && nodes_[a].a == b)) return kFalse;
    const auto key = strash_key(Op::And, a, b);
    if (auto it = strash_.find(key); it != strash_.end()) return it->second;
    return strash_[key] = push({Op::And, a, b});
}

NodeId Circuit::add_xor(NodeId a, NodeId b) {
    check_ref(a);
    check_ref(b);
    if (a > b) std::swap(a, b);
    if (a == kFalse) return b;
    if (a == kTrue) return add_not(b);
    if (a == b) return kFalse;
    const auto key = strash_key(Op::Xor, a, b);
    if (auto it = strash_.find(key); it != strash_.end()) return it->second;
    return strash_[key] = push({Op::Xor, a, b});
}

NodeId Circuit::add_or(NodeId a, NodeId b) { return add_not(add_and(add_not(a), add_not(b))); }

NodeId Circuit::add_mux(NodeId sel, NodeId then_v, NodeId else_v) {
    if (then_v == else_v) return then_v;
    return add_or(add_and(sel, then_v), add_and(add_not(sel), else_v));
}

NodeId Circuit::add_and_all(const std::vector<NodeId>& xs) {
    if (xs.empty()) return kTrue;
    std::vector<NodeId> level = xs;
    while (level.size() > 1) {
        std::vector<NodeId> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(add_and(level[i], level[i + 1]));
        if (level.size() % 2) next.push_back(level.back());
        level = std::move(next);
    }
    return level.front();
}

NodeId Circuit::add_or_all(const std::vector<NodeId>& xs) {
    std::vector<NodeId> inv;
    inv.reserve(xs.size());
    for (auto x : xs) inv.push_back(add_not(x));
    return add_not(add_and_all(inv));
}

NodeId Circuit::add_xor_all(const std::vector<NodeId>& xs) {
    if (xs.empty()) return kFalse;
    std::vector<NodeId> level = xs;
    while (level.size() > 1) {
        std::vector<NodeId> next;
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(add_xor(level[i], level[i + 1]));
        if (level.size() % 2) next.push_back(level.back());
        level = std::move(next);
    }
    return level.front();
}

NodeId Circuit::add_register(bool init) {
    const NodeId id = push({Op::Reg, static_cast<NodeId>(regs_.size()), 0});
    regs_.push_back({id, 0, init, false});
    return id;
}

void Circuit::set_next(NodeId reg, NodeId next) {
    check_ref(next);
    auto& r = regs_.at(register_index(reg));
    r.next = next;
    r.has_next = true;
}

std::size_t Circuit::register_index(NodeId reg) const {
    check_ref(reg);
    if (nodes_[reg].op != Op::Reg) throw InvalidInput("node " + std::to_string(reg) + " is not a register");
    return nodes_[reg].a;
}

const Port* Circuit::find_input(std::string_view name) const {
    for (const auto& p : inputs_)
        if (p.name == name) return &p;
    return nullptr;
}

const Port* Circuit::find_output(std::string_view name) const {
    for (const auto& p : outputs_)
        if (p.name == name) return &p;
    return nullptr;
}

const Port& Circuit::port(std::string_view name) const {
    if (const Port* p = find_input(name)) return *p;
    if (const Port* p = find_output(name)) return *p;
    throw InvalidInput("circuit '" + name_ + "' has no port '" + std::string(name) + "'");
}

std::size_t Circuit::gate_count(Op op) const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [op](const Node& n) { return n.op == op; }));
}

std::size_t Circuit::gate_count() const { return gate_count(Op::Not) + gate_count(Op::And) + gate_count(Op::Xor); }

void Circuit::validate() const {
    for (NodeId id = 0; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        const bool unary = n.op == Op::Not;
        const bool binary = n.op == Op::And || n.op == Op::Xor;
        if ((unary || binary) && n.a >= id) throw InvalidInput("gate " + std::to_string(id) + " not topologically ordered");
        if (binary && n.b >= id) throw InvalidInput("gate " + std::to_string(id) + " not topologically ordered");
    }
    for (const auto& r : regs_) {
        if (!r.has_next) throw InvalidInput("register node " + std::to_string(r.node) + " has no next value");
        check_ref(r.next);
    }
    for (const auto& p : outputs_)
        for (auto b : p.bits) check_ref(b);
}

std::string Circuit::serialize() const {
    std::ostringstream os;
    os << "circuit " << name_ << '\n';
    for (const auto& p : inputs_) {
        os << "input " << p.name;
        for (auto b : p.bits) os << ' ' << b;
        os << '\n';
    }
    for (NodeId id = 2; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        if (n.op == Op::Input) continue;
        os << "node " << id << ' ' << to_string(n.op);
        if (n.op == Op::Not) os << ' ' << n.a;
        if (n.op == Op::And || n.op == Op::Xor) os << ' ' << n.a << ' ' << n.b;
        os << '\n';
    }
    for (const auto& r : regs_) os << "reg " << r.node << ' ' << r.next << ' ' << (r.init ? 1 : 0) << '\n';
    for (const auto& p : outputs_) {
        os << "output " << p.name;
        for (auto b : p.bits) os << ' ' << b;
        os << '\n';
    }
    return os.str();
}

Circuit Circuit::parse(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    Circuit c;
    // Maps ids in the text to ids in the rebuilt circuit (identical unless hashing merges nodes).
    std::unordered_map<NodeId, NodeId> remap{{0, kFalse}, {1, kTrue}};
    auto ref = [&](NodeId id) {
        auto it = remap.find(id);
        if (it == remap.end()) throw ParseError(lineno, "reference to undefined node " + std::to_string(id));
        return it->second;
    };
    std::vector<std::pair<NodeId, NodeId>> pending_next;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "circuit") {
            ls >> c.name_;
        } else if (kw == "input") {
            std::string name;
            ls >> name;
            std::vector<NodeId> ids;
            for (NodeId id; ls >> id;) ids.push_back(id);
            auto bits = c.add_input(name, ids.size());
            for (std::size_t i = 0; i < ids.size(); ++i) remap[ids[i]] = bits[i];
        } else if (kw == "node") {
            NodeId id = 0;
            std::string ops;
            if (!(ls >> id >> ops)) throw ParseError(lineno, "malformed node line");
            const Op op = op_from_string(ops, lineno);
            NodeId a = 0, b = 0;
            switch (op) {
                case Op::Not:
                    if (!(ls >> a)) throw ParseError(lineno, "NOT needs one operand");
                    remap[id] = c.add_not(ref(a));
                    break;
                case Op::And:
                case Op::Xor:
                    if (!(ls >> a >> b)) throw ParseError(lineno, "binary gate needs two operands");
                    remap[id] = op == Op::And ? c.add_and(ref(a), ref(b)) : c.add_xor(ref(a), ref(b));
                    break;
                case Op::Reg: remap[id] = c.add_register(false); break;
                default: throw ParseError(lineno, "unexpected node op " + ops);
            }
        } else if (kw == "reg") {
            NodeId node = 0, next = 0;
            int init = 0;
            if (!(ls >> node >> next >> init)) throw ParseError(lineno, "malformed reg line");
            const NodeId r = ref(node);
            c.regs_.at(c.register_index(r)).init = init != 0;
            pending_next.emplace_back(r, next);
        } else if (kw == "output") {
            std::string name;
            ls >> name;
            std::vector<NodeId> ids;
            for (NodeId id; ls >> id;) ids.push_back(ref(id));
            c.add_output(name, std::move(ids));
        } else {
            throw ParseError(lineno, "unknown directive '" + kw + "'");
        }
    }
    for (auto [r, next] : pending_next) c.set_next(r, ref(next));
    c.validate();
    return c;
}

std::string Circuit::to_aiger() const {
    // AIGER literals: variable v -> 2v, negation sets bit 0.
    std::vector<std::uint32_t> lit(nodes_.size(), 0);
    lit[kFalse] = 0;
    lit[kTrue] = 1;
    std::uint32_t next_var = 1;
    std::vector<std::uint32_t> in_lits;
    for (const auto& p : inputs_)
        for (auto b : p.bits) {
            lit[b] = 2 * next_var++;
            in_lits.push_back(lit[b]);
        }
    for (const auto& r : regs_) lit[r.node] = 2 * next_var++;
    std::vector<std::array<std::uint32_t, 3>> ands;
    auto mk_and = [&](std::uint32_t x, std::uint32_t y) {
        const std::uint32_t out = 2 * next_var++;
        ands.push_back({out, std::max(x, y), std::min(x, y)});
        return out;
    };
    for (NodeId id = 2; id < nodes_.size(); ++id) {
        const Node& n = nodes_[id];
        switch (n.op) {
            case Op::Not: lit[id] = lit[n.a] ^ 1u; break;
            case Op::And: lit[id] = mk_and(lit[n.a], lit[n.b]); break;
            case Op::Xor: {
                const auto x = lit[n.a], y = lit[n.b];
                const auto t1 = mk_and(x, y ^ 1u);
                const auto t2 = mk_and(x ^ 1u, y);
                lit[id] = mk_and(t1 ^ 1u, t2 ^ 1u) ^ 1u;
                break;
            }
            default: break;
        }
    }
    std::vector<std::uint32_t> out_lits;
    for (const auto& p : outputs_)
        for (auto b : p.bits) out_lits.push_back(lit[b]);

    std::ostringstream os;
    os << "aag " << (next_var - 1) << ' ' << in_lits.size() << ' ' << regs_.size() << ' ' << out_lits.size() << ' '
       << ands.size() << '\n';
    for (auto l : in_lits) os << l << '\n';
    for (const auto& r : regs_) os << lit[r.node] << ' ' << lit[r.next] << ' ' << (r.init ? 1 : 0) << '\n';
    for (auto l : out_lits) os << l << '\n';
    for (const auto& a : ands) os << a[0] << ' ' << a[1] << ' ' << a[2] << '\n';
    std::size_t idx = 0;
    for (const auto& p : inputs_)
        for (std::size_t i = 0; i < p.bits.size(); ++i) os << 'i' << idx++ << ' ' << p.name << '[' << i << "]\n";
    idx = 0;
    for (const auto& p : outputs_)
        for (std::size_t i = 0; i < p.bits.size(); ++i) os << 'o' << idx++ << ' ' << p.name << '[' << i << "]\n";
    return os.str();
}

std::vector<std::size_t> node_levels(const Circuit& c) {
    std::vector<std::size_t> lvl(c.nodes().size(), 0);
    for (NodeId id = 0; id < c.nodes().size(); ++id) {
        const Node& n = c.nodes()[id];
        if (n.op == Op::Not) lvl[id] = lvl[n.a] + 1;
        if (n.op == Op::And || n.op == Op::Xor) lvl[id] = std::max(lvl[n.a], lvl[n.b]) + 1;
    }
    return lvl;
}

// ---------------------------------------------------------------------------

Simulator::Simulator(const Circuit& c) : circuit_(c) {
    c.validate();
    reset();
}

void Simulator::reset() {
    state_.clear();
    for (const auto& r : circuit_.registers()) state_.push_back(r.init ? 1 : 0);
}

void Simulator::set_state(const BitVec& state) {
    if (state.size() != state_.size()) throw InvalidInput("set_state: register count mismatch");
    for (std::size_t i = 0; i < state_.size(); ++i) state_[i] = state.get(i);
}

BitVec Simulator::state() const {
    BitVec v(state_.size());
    for (std::size_t i = 0; i < state_.size(); ++i) v.set(i, state_[i]);
    return v;
}

void Simulator::evaluate(const Assignment& inputs, std::vector<std::uint8_t>& values) const {
    const auto& nodes = circuit_.nodes();
    values.assign(nodes.size(), 0);
    values[Circuit::kTrue] = 1;
    for (const auto& p : circuit_.inputs()) {
        auto it = inputs.find(p.name);
        if (it == inputs.end()) throw InvalidInput("simulate: missing input '" + p.name + "'");
        if (it->second.size() != p.width())
            throw InvalidInput("simulate: input '" + p.name + "' has width " + std::to_string(it->second.size()));
        for (std::size_t i = 0; i < p.width(); ++i) values[p.bits[i]] = it->second.get(i);
    }
    for (NodeId id = 2; id < nodes.size(); ++id) {
        const Node& n = nodes[id];
        switch (n.op) {
            case Op::Reg: values[id] = state_[n.a]; break;
            case Op::Not: values[id] = values[n.a] ^ 1u; break;
            case Op::And: values[id] = values[n.a] & values[n.b]; break;
            case Op::Xor: values[id] = values[n.a] ^ values[n.b]; break;
            default: break;
        }
    }
}

std::vector<bool> Simulator::peek(const Assignment& inputs) const {
    std::vector<std::uint8_t> values;
    evaluate(inputs, values);
    return {values.begin(), values.end()};
}

Assignment Simulator::step(const Assignment& inputs) {
    std::vector<std::uint8_t> values;
    evaluate(inputs, values);
    Assignment out;
    for (const auto& p : circuit_.outputs()) {
        BitVec v(p.width());
        for (std::size_t i = 0; i < p.width(); ++i) v.set(i, values[p.bits[i]]);
        out.emplace(p.name, std::move(v));
    }
    const auto& regs = circuit_.registers();
    for (std::size_t i = 0; i < regs.size(); ++i) state_[i] = values[regs[i].next];
    return out;
}

std::vector<Assignment> simulate(const Circuit& c, const std::vector<Assignment>& stimulus) {
    Simulator sim(c);
    std::vector<Assignment> out;
    out.reserve(stimulus.size());
    for (const auto& in : stimulus) out.push_back(sim.step(in));
    return out;
}

Assignment eval_comb(const Circuit& c, const Assignment& inputs) {
    if (!c.is_combinational()) throw InvalidInput("eval_comb: circuit '" + c.name() + "' has registers");
    Simulator sim(c);
    return sim.step(inputs);
}

std::map<std::string, std::vector<std::uint64_t>> eval_comb_packed(
    const Circuit& c, const std::map<std::string, std::vector<std::uint64_t>>& inputs) {
    if (!c.is_combinational()) throw InvalidInput("eval_comb_packed: circuit has registers");
    const auto& nodes = c.nodes();
    std::vector<std::uint64_t> v(nodes.size(), 0);
    v[Circuit::kTrue] = ~std::uint64_t{0};
    for (const auto& p : c.inputs()) {
        auto it = inputs.find(p.name);
        if (it == inputs.end() || it->second.size() != p.width())
            throw InvalidInput("eval_comb_packed: bad or missing input '" + p.name + "'");
        for (std::size_t i = 0; i < p.width(); ++i) v[p.bits[i]] = it->second[i];
    }
    for (NodeId id = 2; id < nodes.size(); ++id) {
        const Node& n = nodes[id];
        switch (n.op) {
            case Op::Not: v[id] = ~v[n.a]; break;
            case Op::And: v[id] = v[n.a] & v[n.b]; break;
            case Op::Xor: v[id] = v[n.a] ^ v[n.b]; break;
            default: break;
        }
    }
    std::map<std::string, std::vector<std::uint64_t>> out;
    for (const auto& p : c.outputs()) {
        std::vector<std::uint64_t> bits;
        for (auto b : p.bits) bits.push_back(v[b]);
        out.emplace(p.name, std::move(bits));
    }
    return out;
}

}  // namespace eccprove
