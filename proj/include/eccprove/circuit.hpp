#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eccprove/gf2.hpp"

namespace eccprove {

using NodeId = std::uint32_t;

enum class Op : std::uint8_t { Const0, Const1, Input, Reg, Not, And, Xor };

const char* to_string(Op op);

struct Node {
    Op op = Op::Const0;
    NodeId a = 0;
    NodeId b = 0;
};

struct Register {
    NodeId node = 0;
    NodeId next = 0;
    bool init = false;
    bool has_next = false;
};

struct Port {
    std::string name;
    std::vector<NodeId> bits;

    std::size_t width() const noexcept { return bits.size(); }
};

/// Bit-level netlist. Gates only reference lower-numbered nodes, so node order
/// is a topological order of the combinational logic; registers and inputs
/// are sources. Node 0 is constant false, node 1 constant true.
///
/// add_and/add_xor/add_not fold constants and hash structurally, so building
/// the same gate twice yields the same node.
class Circuit {
public:
    static constexpr NodeId kFalse = 0;
    static constexpr NodeId kTrue = 1;

    explicit Circuit(std::string name = "top");

    const std::string& name() const noexcept { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    std::vector<NodeId> add_input(const std::string& name, std::size_t width);
    NodeId add_input_bit(const std::string& name) { return add_input(name, 1).front(); }
    void add_output(const std::string& name, std::vector<NodeId> bits);
    void add_output_bit(const std::string& name, NodeId bit) { add_output(name, {bit}); }

    NodeId constant(bool v) const noexcept { return v ? kTrue : kFalse; }
    NodeId add_not(NodeId a);
    NodeId add_and(NodeId a, NodeId b);
    NodeId add_xor(NodeId a, NodeId b);
    NodeId add_or(NodeId a, NodeId b);
    NodeId add_mux(NodeId sel, NodeId then_v, NodeId else_v);
    NodeId add_and_all(const std::vector<NodeId>& xs);
    NodeId add_or_all(const std::vector<NodeId>& xs);
    /// Balanced XOR tree.
    NodeId add_xor_all(const std::vector<NodeId>& xs);

    NodeId add_register(bool init);
    void set_next(NodeId reg, NodeId next);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    const Node& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<Port>& inputs() const noexcept { return inputs_; }
    const std::vector<Port>& outputs() const noexcept { return outputs_; }
    const std::vector<Register>& registers() const noexcept { return regs_; }
    /// Index into registers() for a Reg node.
    std::size_t register_index(NodeId reg) const;

    const Port* find_input(std::string_view name) const;
    const Port* find_output(std::string_view name) const;
    /// Input or output port by name; throws when absent.
    const Port& port(std::string_view name) const;
    bool has_port(std::string_view name) const { return find_input(name) || find_output(name); }

    bool is_combinational() const noexcept { return regs_.empty(); }
    std::size_t gate_count(Op op) const;
    std::size_t gate_count() const;

    /// Throws InvalidInput if a register lacks a next value or a reference is dangling.
    void validate() const;

    /// Line format: "circuit <name>", then one "node <id> <OP> [a [b]]",
    /// "reg <node> <next> <init>", "input <name> <ids..>", "output <name> <ids..>" per line.
    std::string serialize() const;
    static Circuit parse(std::string_view text);

    /// AIGER ascii (aag) with XOR lowered to AND/NOT; latch init values emitted.
    std::string to_aiger() const;

private:
    NodeId push(Node n);
    void check_ref(NodeId id) const;
    void check_new_port_name(const std::string& name) const;

    std::string name_;
    std::vector<Node> nodes_;
    std::vector<Port> inputs_;
    std::vector<Port> outputs_;
    std::vector<Register> regs_;
    std::unordered_map<std::uint64_t, NodeId> strash_;
};

/// Logic depth of every node (sources at 0).
std::vector<std::size_t> node_levels(const Circuit& c);

using Assignment = std::map<std::string, BitVec>;

/// Cycle-accurate evaluator. Owns its register state; one instance per thread.
class Simulator {
public:
    explicit Simulator(const Circuit& c);

    void reset();
    /// Overwrite register state (register order as in Circuit::registers()).
    void set_state(const BitVec& state);
    BitVec state() const;

    /// Evaluates one cycle with the given inputs, returns all output ports, then clocks registers.
    Assignment step(const Assignment& inputs);
    /// Values of every node in the current cycle without clocking.
    std::vector<bool> peek(const Assignment& inputs) const;

private:
    void evaluate(const Assignment& inputs, std::vector<std::uint8_t>& values) const;

    const Circuit& circuit_;
    std::vector<std::uint8_t> state_;
};

std::vector<Assignment> simulate(const Circuit& c, const std::vector<Assignment>& stimulus);

/// Single evaluation of a combinational circuit.
Assignment eval_comb(const Circuit& c, const Assignment& inputs);

/// 64 independent evaluations of a combinational circuit at once: input port
/// bit j of lane l is bit l of inputs[port][j].
std::map<std::string, std::vector<std::uint64_t>> eval_comb_packed(
    const Circuit& c, const std::map<std::string, std::vector<std::uint64_t>>& inputs);

}  // namespace eccprove
