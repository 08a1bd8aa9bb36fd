#include "eccprove/synth.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "eccprove/error.hpp"

namespace eccprove {

Circuit synth_encoder(const CodeSpec& spec) {
    const SystematicForm sf = systematic_form(spec.h);
    Circuit c("encoder");
    const auto data = c.add_input("data_i", spec.k);
    std::vector<NodeId> cw(spec.n, Circuit::kFalse);
    for (std::size_t i = 0; i < spec.k; ++i) cw[sf.free_columns[i]] = data[i];
    for (std::size_t row = 0; row < spec.r; ++row) {
        std::vector<NodeId> terms;
        for (std::size_t i = 0; i < spec.k; ++i)
            if (sf.reduced.get(row, sf.free_columns[i])) terms.push_back(data[i]);
        cw[sf.pivot_columns[row]] = c.add_xor_all(terms);
    }
    c.add_output("cw_o", cw);
    return c;
}

namespace {

std::vector<NodeId> syndrome_bits(Circuit& c, const BitMatrix& h, const std::vector<NodeId>& cw) {
    std::vector<NodeId> s;
    for (std::size_t row = 0; row < h.rows(); ++row) {
        std::vector<NodeId> terms;
        for (std::size_t j = 0; j < h.cols(); ++j)
            if (h.get(row, j)) terms.push_back(cw[j]);
        s.push_back(c.add_xor_all(terms));
    }
    return s;
}

std::uint64_t column_value(const BitMatrix& h, std::size_t col) {
    std::uint64_t v = 0;
    for (std::size_t row = 0; row < h.rows(); ++row)
        if (h.get(row, col)) v |= std::uint64_t{1} << row;
    return v;
}

std::uint64_t binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Minterm detector over the syndrome, built from 4-bit predecoded chunks so
// that table entries share logic.
class SyndromeMatcher {
public:
    SyndromeMatcher(Circuit& c, std::vector<NodeId> s) : c_(c), s_(std::move(s)) {}

    NodeId match(std::uint64_t value) {
        std::vector<NodeId> parts;
        for (std::size_t lo = 0; lo < s_.size(); lo += kChunk) {
            const std::size_t width = std::min(kChunk, s_.size() - lo);
            const auto chunk = static_cast<unsigned>((value >> lo) & ((1u << width) - 1));
            parts.push_back(chunk_minterm(lo, width, chunk));
        }
        return c_.add_and_all(parts);
    }

private:
    static constexpr std::size_t kChunk = 4;

    NodeId chunk_minterm(std::size_t lo, std::size_t width, unsigned chunk) {
        const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 8) | chunk;
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        std::vector<NodeId> lits;
        for (std::size_t b = 0; b < width; ++b)
            lits.push_back((chunk >> b) & 1u ? s_[lo + b] : c_.add_not(s_[lo + b]));
        return cache_[key] = c_.add_and_all(lits);
    }

    Circuit& c_;
    std::vector<NodeId> s_;
    std::unordered_map<std::uint64_t, NodeId> cache_;
};

}  // namespace

Circuit synth_mutated_encoder(const CodeSpec& spec) {
    const SystematicForm sf = systematic_form(spec.h);
    CodeSpec m = spec;
    m.h = sf.reduced;
    m.h.row(0).flip(sf.free_columns.at(0));
    Circuit c = synth_encoder(m);
    c.set_name("encoder_mutated");
    return c;
}

Circuit synth_syndrome(const CodeSpec& spec) {
    Circuit c("syndrome");
    const auto cw = c.add_input("cw_i", spec.n);
    c.add_output("syn_o", syndrome_bits(c, spec.h, cw));
    return c;
}

std::vector<std::string> decoder_flag_names(const CodeSpec& spec) {
    std::vector<std::string> names{"no_err"};
    for (std::size_t w = 1; w <= spec.t_detect; ++w) names.push_back("err_" + std::to_string(w));
    return names;
}

Circuit synth_decoder(const CodeSpec& spec, DecoderMutation mutation) {
    if (spec.n > kDecoderMaxN)
        throw InvalidInput("synth_decoder: n=" + std::to_string(spec.n) + " exceeds " + std::to_string(kDecoderMaxN));
    if (spec.t_detect < 1) throw InvalidInput("synth_decoder: t_detect must be >= 1");
    std::uint64_t table_size = 0;
    for (std::size_t w = 0; w <= spec.t_correct; ++w) table_size += binom(spec.n, w);
    if (table_size > kDecoderMaxTable)
        throw InvalidInput("synth_decoder: syndrome table needs " + std::to_string(table_size) + " entries, budget " +
                           std::to_string(kDecoderMaxTable));

    Circuit c("decoder");
    const auto cw = c.add_input("cw_i", spec.n);
    const auto s = syndrome_bits(c, spec.h, cw);

    std::vector<std::uint64_t> cols(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) cols[j] = column_value(spec.h, j);

    struct Entry {
        std::vector<std::size_t> positions;
        NodeId match;
    };
    std::vector<Entry> table;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    SyndromeMatcher matcher(c, s);

    std::vector<std::size_t> pos;
    std::function<void(std::size_t, std::size_t, std::uint64_t)> enumerate = [&](std::size_t start, std::size_t left,
                                                                                 std::uint64_t syn) {
        if (left == 0) {
            if (!seen.emplace(syn, table.size()).second || syn == 0)
                throw InvalidInput("synth_decoder: syndrome collision, code cannot correct " +
                                   std::to_string(spec.t_correct) + " errors");
            table.push_back({pos, Circuit::kFalse});
            return;
        }
        for (std::size_t j = start; j + left <= spec.n; ++j) {
            pos.push_back(j);
            enumerate(j + 1, left - 1, syn ^ cols[j]);
            pos.pop_back();
        }
    };
    for (std::size_t w = 1; w <= spec.t_correct; ++w) enumerate(0, w, 0);
    for (auto& e : table) {
        std::uint64_t syn = 0;
        for (auto p : e.positions) syn ^= cols[p];
        e.match = matcher.match(syn);
    }

    std::vector<NodeId> not_s;
    for (auto b : s) not_s.push_back(c.add_not(b));
    const NodeId no_err = c.add_and_all(not_s);

    std::vector<std::vector<NodeId>> by_weight(spec.t_correct + 1);
    std::vector<std::vector<NodeId>> by_position(spec.n);
    std::vector<NodeId> all_matches;
    for (const auto& e : table) {
        by_weight[e.positions.size()].push_back(e.match);
        for (auto p : e.positions) by_position[p].push_back(e.match);
        all_matches.push_back(e.match);
    }
    const NodeId any_match = c.add_or_all(all_matches);
    const NodeId uncorrectable = c.add_and(c.add_not(no_err), c.add_not(any_match));

    std::vector<NodeId> flags(spec.t_detect + 1, Circuit::kFalse);
    flags[0] = no_err;
    for (std::size_t w = 1; w <= spec.t_correct; ++w) flags[w] = c.add_or_all(by_weight[w]);
    flags[spec.t_detect] = c.add_or(flags[spec.t_detect], uncorrectable);

    if (mutation == DecoderMutation::OneHotOverlap && !by_weight[spec.t_correct].empty()) {
        const std::size_t lower = spec.t_correct - 1;
        flags[lower] = c.add_or(flags[lower], by_weight[spec.t_correct].front());
    }

    std::vector<NodeId> corrected(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) corrected[j] = c.add_xor(cw[j], c.add_or_all(by_position[j]));

    const auto names = decoder_flag_names(spec);
    for (std::size_t w = 0; w < names.size(); ++w) c.add_output_bit(names[w], flags[w]);

    const SystematicForm sf = systematic_form(spec.h);
    std::vector<NodeId> data_o, ecc_o;
    for (auto p : sf.free_columns) data_o.push_back(corrected[p]);
    for (auto p : sf.pivot_columns) ecc_o.push_back(corrected[p]);
    c.add_output("data_o", data_o);
    c.add_output("ecc_o", ecc_o);
    c.add_output("syn_o", s);
    return c;
}

// ---------------------------------------------------------------------------

PipelineSchedule parse_schedule(const std::string& text) {
    std::istringstream is(text);
    std::string part;
    std::vector<std::size_t> v;
    while (std::getline(is, part, ',')) {
        std::size_t used = 0;
        long long x = -1;
        try {
            x = std::stoll(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != part.size() || x < 1) throw InvalidInput("schedule: expected positive integers 'E,D,C', got '" + text + "'");
        v.push_back(static_cast<std::size_t>(x));
    }
    if (v.size() != 3) throw InvalidInput("schedule: expected three values 'E,D,C', got '" + text + "'");
    return {v[0], v[1], v[2]};
}

namespace {

// Copies a combinational circuit into `dst`, cutting it into register stages
// by logic level. Source values are available at stage 0; get(v, s) returns
// node v delayed so that it is valid at stage s.
class StagedCopy {
public:
    StagedCopy(Circuit& dst, const Circuit& src, const std::map<std::string, std::vector<NodeId>>& bindings,
               std::size_t stages)
        : dst_(dst), src_(src), stages_(stages), base_(src.nodes().size()), group_(src.nodes().size()) {
        if (!src.is_combinational()) throw InvalidInput("pipeline: source circuit must be combinational");
        const auto levels = node_levels(src);
        const std::size_t max_level = std::max<std::size_t>(1, *std::max_element(levels.begin(), levels.end()));
        for (NodeId v = 0; v < src.nodes().size(); ++v) {
            group_[v] = stages == 0 ? 0 : (levels[v] * stages + max_level - 1) / max_level;
            const Node& n = src.node(v);
            switch (n.op) {
                case Op::Const0: base_[v] = Circuit::kFalse; break;
                case Op::Const1: base_[v] = Circuit::kTrue; break;
                case Op::Input: {
                    const Port& p = src.inputs()[n.a];
                    const auto it = bindings.find(p.name);
                    if (it == bindings.end() || it->second.size() != p.width())
                        throw InvalidInput("pipeline: no binding for input " + p.name);
                    const auto bit = std::find(p.bits.begin(), p.bits.end(), v) - p.bits.begin();
                    base_[v] = it->second[static_cast<std::size_t>(bit)];
                    break;
                }
                case Op::Not: base_[v] = dst.add_not(get(n.a, group_[v])); break;
                case Op::And: base_[v] = dst.add_and(get(n.a, group_[v]), get(n.b, group_[v])); break;
                case Op::Xor: base_[v] = dst.add_xor(get(n.a, group_[v]), get(n.b, group_[v])); break;
                case Op::Reg: break;
            }
        }
    }

    NodeId get(NodeId v, std::size_t stage) {
        if (stage <= group_[v]) return base_[v];
        const NodeId b = base_[v];
        if (b == Circuit::kFalse || b == Circuit::kTrue) return b;
        const std::uint64_t key = (static_cast<std::uint64_t>(v) << 16) | stage;
        if (auto it = delayed_.find(key); it != delayed_.end()) return it->second;
        const NodeId prev = get(v, stage - 1);
        const NodeId reg = dst_.add_register(false);
        dst_.set_next(reg, prev);
        return delayed_[key] = reg;
    }

    std::vector<NodeId> output(const std::string& name) {
        std::vector<NodeId> out;
        for (auto b : src_.port(name).bits) out.push_back(get(b, stages_));
        return out;
    }

private:
    Circuit& dst_;
    const Circuit& src_;
    std::size_t stages_;
    std::vector<NodeId> base_;
    std::vector<std::size_t> group_;
    std::unordered_map<std::uint64_t, NodeId> delayed_;
};

struct StageFsm {
    NodeId idle = 0;
    std::vector<NodeId> st;
    NodeId busy = 0;

    std::vector<NodeId> state_bits() const {
        std::vector<NodeId> v{idle};
        v.insert(v.end(), st.begin(), st.end());
        return v;
    }
};

StageFsm make_fsm(Circuit& c, std::size_t stages) {
    StageFsm f;
    f.idle = c.add_register(true);
    for (std::size_t i = 0; i < stages; ++i) f.st.push_back(c.add_register(false));
    f.busy = c.add_or_all(f.st);
    return f;
}

void close_fsm(Circuit& c, const StageFsm& f, NodeId rst_n, NodeId go) {
    const NodeId running = c.add_or(c.add_and(f.idle, c.add_not(go)), f.st.back());
    c.set_next(f.idle, c.add_mux(rst_n, running, Circuit::kTrue));
    c.set_next(f.st[0], c.add_and(rst_n, go));
    for (std::size_t i = 1; i < f.st.size(); ++i) c.set_next(f.st[i], c.add_and(rst_n, f.st[i - 1]));
}

std::vector<NodeId> hold_when(Circuit& c, NodeId valid, const std::vector<NodeId>& fresh) {
    std::vector<NodeId> out;
    for (auto b : fresh) {
        const NodeId hold = c.add_register(false);
        const NodeId o = c.add_mux(valid, b, hold);
        c.set_next(hold, o);
        out.push_back(o);
    }
    return out;
}

}  // namespace

Circuit pipeline(const Circuit& src, std::size_t latency) {
    if (latency < 1) throw InvalidInput("pipeline: latency must be >= 1");
    if (!src.is_combinational()) throw InvalidInput("pipeline: source circuit must be combinational");
    Circuit c(src.name() + "_pipe");
    const NodeId rst_n = c.add_input_bit("rst_n_i");
    const NodeId start = c.add_input_bit("start_i");
    std::map<std::string, std::vector<NodeId>> ins;
    for (const auto& p : src.inputs()) ins[p.name] = c.add_input(p.name, p.width());

    StageFsm fsm = make_fsm(c, latency);
    const NodeId go = c.add_and_all({rst_n, start, fsm.idle, c.add_not(fsm.busy)});
    std::map<std::string, std::vector<NodeId>> captured;
    for (const auto& [name, bits] : ins) {
        for (auto b : bits) {
            const NodeId q = c.add_register(false);
            c.set_next(q, c.add_mux(go, b, q));
            captured[name].push_back(q);
        }
    }
    StagedCopy copy(c, src, captured, latency - 1);
    close_fsm(c, fsm, rst_n, go);

    const NodeId valid = fsm.st.back();
    for (const auto& p : src.outputs()) c.add_output(p.name, hold_when(c, valid, copy.output(p.name)));
    c.add_output_bit("valid_o", valid);
    c.add_output_bit("accept_o", go);
    c.add_output("state_o", fsm.state_bits());
    c.validate();
    return c;
}

Circuit pipeline(const Circuit& c, const PipelineSchedule& sched) { return pipeline(c, sched.total()); }

Circuit build_wrapper(const Circuit& enc, const Circuit& dec) {
    const Port* data = enc.find_input("data_i");
    const Port* cw_o = enc.find_output("cw_o");
    const Port* cw_i = dec.find_input("cw_i");
    if (!data || !cw_o || !cw_i) throw InvalidInput("build_wrapper: need encoder data_i/cw_o and decoder cw_i");
    if (cw_o->width() != cw_i->width())
        throw InvalidInput("build_wrapper: cw_o width " + std::to_string(cw_o->width()) + " != cw_i width " +
                           std::to_string(cw_i->width()));
    if (const Port* d = dec.find_output("data_o"); d && d->width() != data->width())
        throw InvalidInput("build_wrapper: data_o width differs from data_i width");
    if (!enc.is_combinational() || !dec.is_combinational())
        throw InvalidInput("build_wrapper: encoder and decoder must be combinational");

    Circuit w("wrapper");
    std::map<std::string, std::vector<NodeId>> enc_in, dec_in;
    for (const auto& p : enc.inputs()) enc_in[p.name] = w.add_input(p.name, p.width());
    for (const auto& p : dec.inputs()) dec_in[p.name] = w.add_input(p.name, p.width());
    StagedCopy e(w, enc, enc_in, 0);
    StagedCopy d(w, dec, dec_in, 0);
    for (const auto& p : enc.outputs()) w.add_output(p.name, e.output(p.name));
    for (const auto& p : dec.outputs()) w.add_output(p.name, d.output(p.name));
    w.validate();
    return w;
}

Circuit build_sequential_core(const CodeSpec& spec, const PipelineSchedule& sched) {
    if (sched.encode_cycles < 1 || sched.detect_cycles < 1 || sched.correct_cycles < 1)
        throw InvalidInput("sequential core: every schedule entry must be >= 1");
    const SystematicForm sf = systematic_form(spec.h);
    const Circuit enc = synth_encoder(spec);
    const Circuit dec = synth_decoder(spec);
    const std::size_t E = sched.encode_cycles, D = sched.decode();

    Circuit c("seq_core");
    const NodeId rst_n = c.add_input_bit("rst_n_i");
    const NodeId enc_start = c.add_input_bit("enc_start_i");
    const auto data_i = c.add_input("data_i", spec.k);
    const NodeId dec_start = c.add_input_bit("dec_start_i");
    const auto cw_i = c.add_input("cw_i", spec.n);

    StageFsm ef = make_fsm(c, E);
    StageFsm df = make_fsm(c, D);
    const NodeId enc_go = c.add_and_all({rst_n, enc_start, ef.idle, c.add_not(ef.busy), df.idle});
    const NodeId dec_go = c.add_and_all({rst_n, dec_start, df.idle, ef.idle, c.add_not(enc_start)});

    std::vector<NodeId> buf;
    for (std::size_t j = 0; j < spec.n; ++j) buf.push_back(c.add_register(false));

    // Encoder: check bits through the staged copy, data bits straight from the buffer.
    std::map<std::string, std::vector<NodeId>> enc_bind{{"data_i", {}}};
    for (auto p : sf.free_columns) enc_bind["data_i"].push_back(buf[p]);
    StagedCopy ecopy(c, enc, enc_bind, E - 1);
    const auto enc_cw = ecopy.output("cw_o");
    std::vector<NodeId> cw_fresh(spec.n);
    for (auto p : sf.pivot_columns) cw_fresh[p] = enc_cw[p];
    for (auto p : sf.free_columns) cw_fresh[p] = buf[p];

    StagedCopy dcopy(c, dec, {{"cw_i", buf}}, D - 1);
    const NodeId enc_valid = ef.st.back();
    const NodeId dec_valid = df.st.back();

    const auto dec_data = dcopy.output("data_o");
    const auto dec_ecc = dcopy.output("ecc_o");
    std::vector<NodeId> write_back(spec.n);
    for (std::size_t i = 0; i < spec.k; ++i) write_back[sf.free_columns[i]] = dec_data[i];
    for (std::size_t i = 0; i < spec.r; ++i) write_back[sf.pivot_columns[i]] = dec_ecc[i];

    std::vector<NodeId> enc_word(spec.n, Circuit::kFalse);
    for (std::size_t i = 0; i < spec.k; ++i) enc_word[sf.free_columns[i]] = data_i[i];
    for (std::size_t j = 0; j < spec.n; ++j) {
        NodeId nx = c.add_mux(dec_valid, write_back[j], buf[j]);
        nx = c.add_mux(dec_go, cw_i[j], nx);
        nx = c.add_mux(enc_go, enc_word[j], nx);
        c.set_next(buf[j], nx);
    }

    close_fsm(c, ef, rst_n, enc_go);
    close_fsm(c, df, rst_n, dec_go);

    c.add_output("cw_o", hold_when(c, enc_valid, cw_fresh));
    c.add_output_bit("enc_valid_o", enc_valid);
    c.add_output_bit("enc_accept_o", enc_go);
    c.add_output_bit("enc_ready_o", c.add_and_all({rst_n, ef.idle, c.add_not(ef.busy), df.idle}));
    c.add_output("enc_state_o", ef.state_bits());
    for (const auto& p : dec.outputs()) c.add_output(p.name, hold_when(c, dec_valid, dcopy.output(p.name)));
    c.add_output_bit("dec_valid_o", dec_valid);
    c.add_output_bit("dec_accept_o", dec_go);
    c.add_output("dec_state_o", df.state_bits());
    c.validate();
    return c;
}

namespace {

std::string join_stages(const BitVec& state, const std::function<std::string(std::size_t)>& name) {
    std::string out;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (!state.get(i)) continue;
        if (!out.empty()) out += '+';
        out += name(i);
    }
    return out.empty() ? "NONE" : out;
}

}  // namespace

std::string encoder_stage_name(const BitVec& state) {
    return join_stages(state, [](std::size_t i) { return i == 0 ? std::string("IDLE") : "ENC" + std::to_string(i); });
}

std::string decoder_stage_name(const BitVec& state, const PipelineSchedule& sched) {
    return join_stages(state, [&](std::size_t i) {
        if (i == 0) return std::string("IDLE");
        if (i <= sched.detect_cycles) return "DET" + std::to_string(i);
        return "COR" + std::to_string(i - sched.detect_cycles);
    });
}

}  // namespace eccprove
