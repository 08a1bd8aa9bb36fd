// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eccprove/codes.hpp"
#include "eccprove/mc.hpp"
#include "eccprove/oracle.hpp"
#include "eccprove/property.hpp"
#include "eccprove/run.hpp"
#include "eccprove/sat.hpp"
#include "eccprove/synth.hpp"
#include "support.hpp"

using namespace eccprove;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
        body(o);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double dt = seconds_since(t0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3fs", dt);
    if (dt > limit_s) o.require(false, "runtime " + std::string(buf) + " over limit");
    if (!o.pass) ++failures;
    std::printf("CRITERION %d %s: %s [%s] %s\n", id, title, o.pass ? "PASS" : "FAIL", buf, o.detail.c_str());
    std::fflush(stdout);
}

std::size_t jobs() { return std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8); }

CodeSpec bch16() { return extend_overall_parity(build_bch(4, 3)); }
CodeSpec bch32() { return extend_overall_parity(build_bch(5, 3)); }

// Binomial sums via Pascal's triangle, independent of the library.
BigCount pascal_sum(std::size_t n, std::size_t w) {
    std::vector<BigCount> row{1};
    for (std::size_t i = 1; i <= n; ++i) {
        std::vector<BigCount> next(i + 1, 1);
        for (std::size_t j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    BigCount s = 0;
    for (std::size_t j = 1; j <= std::min(w, n); ++j) s += row[j];
    return s;
}

BitVec random_mask(std::mt19937_64& rng, std::size_t n, std::size_t w) {
    BitVec m(n);
    while (m.weight() < w) m.set(rng() % n);
    return m;
}

// Evaluates a single-input combinational circuit on many words, 64 at a time.
std::vector<Assignment> eval_many(const Circuit& c, const std::string& port, const std::vector<BitVec>& words) {
    std::vector<Assignment> out;
    const std::size_t width = c.port(port).width();
    for (std::size_t base = 0; base < words.size(); base += 64) {
        const std::size_t lanes = std::min<std::size_t>(64, words.size() - base);
        std::vector<std::uint64_t> packed(width, 0);
        for (std::size_t l = 0; l < lanes; ++l)
            for (std::size_t j = 0; j < width; ++j)
                if (words[base + l].get(j)) packed[j] |= std::uint64_t{1} << l;
        const auto res = eval_comb_packed(c, {{port, packed}});
        for (std::size_t l = 0; l < lanes; ++l) {
            Assignment a;
            for (const auto& [name, bits] : res) {
                BitVec v(bits.size());
                for (std::size_t j = 0; j < bits.size(); ++j) v.set(j, (bits[j] >> l) & 1u);
                a[name] = v;
            }
            out.push_back(std::move(a));
        }
    }
    return out;
}

std::size_t raised_flag(const CodeSpec& s, const Assignment& out) {
    std::size_t hot = 0, which = 0;
    const auto names = decoder_flag_names(s);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (out.at(names[i]).get(0)) {
            ++hot;
            which = i;
        }
    return hot == 1 ? which : SIZE_MAX;
}

std::string verdict(mc::Verdict v) { return mc::to_string(v); }

// ---------------------------------------------------------------------------

void c1(Outcome& o) {
    const auto t0 = Clock::now();
    const BigCount n = count_patterns(128, 4);
    const double ms = seconds_since(t0) * 1e3;
    o.require(n == BigCount(11017632), "count_patterns(128,4) = " + n.str());
    o.require(n == pascal_sum(128, 4), "disagrees with Pascal oracle");
    o.require(ms < 1.0, "count took " + std::to_string(ms) + " ms");
    o.note("count=" + n.str() + " in " + std::to_string(ms) + " ms");
}

void c2(Outcome& o) {
    const CodeSpec s = bch16();
    const std::size_t d = min_distance(s);
    o.require(d == 8, "min_distance " + std::to_string(d));
    o.require(testing::brute_min_distance(s.h) == 8, "brute-force distance differs");
    const auto rep = exhaustive_check(s, 4, DataMode::Fixed, kDefaultSeed, jobs());
    o.require(rep.total_patterns() == 2516, "patterns " + std::to_string(rep.total_patterns()));
    o.require(rep.all_pass(), "oracle reported failures");
    // Independent re-check: syndromes of every correctable mask are distinct and nonzero,
    // and no weight-4 mask shares a syndrome with a correctable one.
    std::map<std::uint64_t, std::size_t> seen;
    bool distinct = true;
    for (std::uint64_t m = 1; m < (1u << 16); ++m) {
        const BitVec mask = BitVec::from_uint(16, m);
        const std::size_t w = mask.weight();
        if (w > 4) continue;
        const std::uint64_t syn = testing::naive_mul(s.h, mask).to_uint();
        if (syn == 0) distinct = false;
        if (w <= 3) distinct &= seen.emplace(syn, w).second;
    }
    for (std::uint64_t m = 1; m < (1u << 16); ++m) {
        const BitVec mask = BitVec::from_uint(16, m);
        if (mask.weight() == 4) distinct &= !seen.count(testing::naive_mul(s.h, mask).to_uint());
    }
    o.require(distinct, "syndrome table not injective");
    o.note("d=8, 2516/2516 masks pass");
}

void c3(Outcome& o) {
    for (const CodeSpec& s : {bch16(), bch32()}) {
        const Circuit syn = synth_syndrome(s);
        auto sys = std::make_shared<const Circuit>(syn);
        const VerificationPlan plan{sys, build_linearity_lemmas(syn, s)};
        mc::EngineConfig cfg;
        cfg.jobs = jobs();
        const auto rep = mc::prove_plan(plan, cfg);
        for (const auto& e : rep.entries) {
            o.require(e.result.verdict == mc::Verdict::Proven, s.id() + " " + e.property + " " + verdict(e.result.verdict));
            o.note(s.id() + " " + e.property + " proven n=" + std::to_string(e.result.bound));
        }
        // Random pairs against the matrix product.
        std::mt19937_64 rng(0xC3);
        const Circuit enc = synth_encoder(s);
        std::vector<BitVec> xs, ys, xys, ds;
        const std::size_t pairs = 100000;
        for (std::size_t i = 0; i < pairs; ++i) {
            xs.push_back(testing::random_bits(rng, s.n));
            ys.push_back(testing::random_bits(rng, s.n));
            xys.push_back(xs.back() ^ ys.back());
        }
        const auto sx = eval_many(syn, "cw_i", xs), sy = eval_many(syn, "cw_i", ys), sxy = eval_many(syn, "cw_i", xys);
        std::size_t bad = 0;
        for (std::size_t i = 0; i < pairs; ++i) {
            const BitVec a = sx[i].at("syn_o"), b = sy[i].at("syn_o"), c = sxy[i].at("syn_o");
            if ((a ^ b) != c) ++bad;
            if (i < 1000 && a != testing::naive_mul(s.h, xs[i])) ++bad;
        }
        // L1 and L3 on random data and masks.
        for (std::size_t i = 0; i < 1000; ++i) ds.push_back(testing::random_bits(rng, s.k));
        const auto cws = eval_many(enc, "data_i", ds);
        std::vector<BitVec> cw_words, masked, masks;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            cw_words.push_back(cws[i].at("cw_o"));
            masks.push_back(testing::random_bits(rng, s.n));
            masked.push_back(cw_words.back() ^ masks.back());
        }
        const auto s0 = eval_many(syn, "cw_i", cw_words), s1 = eval_many(syn, "cw_i", masked),
                   s2 = eval_many(syn, "cw_i", masks);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            if (!s0[i].at("syn_o").is_zero()) ++bad;
            if (s1[i].at("syn_o") != s2[i].at("syn_o")) ++bad;
        }
        o.require(bad == 0, s.id() + " random lemma violations " + std::to_string(bad));
        o.note(s.id() + " 1e5 random pairs, 0 violations");
    }
}

void c4(Outcome& o) {
    for (const CodeSpec& s : {bch16(), bch32()}) {
        RunConfig rc;
        rc.m = s.n == 16 ? 4 : 5;
        rc.t = 3;
        rc.fixed_data = true;
        rc.jobs = jobs();
        const Session sess = build_session(rc);
        const auto t0 = Clock::now();
        const auto rep = mc::prove_plan(sess.plan, engine_config(rc));
        const double dt = seconds_since(t0);
        o.require(rep.find("L3_position_only") && rep.find("L3_position_only")->result.verdict == mc::Verdict::Proven,
                  s.id() + " L3 not proven");
        std::size_t proven = 0;
        for (const auto& e : rep.entries) {
            if (e.result.verdict == mc::Verdict::Proven && !e.degraded()) ++proven;
            else o.require(false, s.id() + " " + e.property + " " + verdict(e.result.verdict));
        }
        char buf[128];
        std::snprintf(buf, sizeof buf, "%s %zu/%zu proven in %.1fs", s.id().c_str(), proven, rep.entries.size(), dt);
        o.note(buf);
        if (s.n == 32) o.require(dt < 15 * 60, "(32,16) plan over 15 min");

        // Data independence: every mask gives the same verdict for random data as for the fixed word.
        std::mt19937_64 rng(0xC4);
        const Circuit enc = synth_encoder(s), dec = synth_decoder(s);
        std::size_t discrepancies = 0;
        for (std::size_t w = 0; w <= s.t_detect; ++w) {
            std::vector<BitVec> ds, fixed_rx, rand_rx, masks;
            for (int i = 0; i < 100; ++i) {
                ds.push_back(testing::random_bits(rng, s.k));
                masks.push_back(random_mask(rng, s.n, w));
            }
            const auto cw_r = eval_many(enc, "data_i", ds);
            const BitVec cw_f = eval_comb(enc, {{"data_i", sess.fixed_data}}).at("cw_o");
            for (int i = 0; i < 100; ++i) {
                rand_rx.push_back(cw_r[i].at("cw_o") ^ masks[i]);
                fixed_rx.push_back(cw_f ^ masks[i]);
            }
            const auto out_r = eval_many(dec, "cw_i", rand_rx), out_f = eval_many(dec, "cw_i", fixed_rx);
            for (int i = 0; i < 100; ++i) {
                const bool corrected_r = out_r[i].at("data_o") == ds[i];
                const bool corrected_f = out_f[i].at("data_o") == sess.fixed_data;
                if (raised_flag(s, out_r[i]) != raised_flag(s, out_f[i]) || corrected_r != corrected_f ||
                    out_r[i].at("syn_o") != out_f[i].at("syn_o"))
                    ++discrepancies;
            }
        }
        o.require(discrepancies == 0, s.id() + " data-dependent discrepancies " + std::to_string(discrepancies));
    }
    o.note("spot check 100 words per weight class, 0 discrepancies");
}

void c5(Outcome& o) {
    const CodeSpec s = bch16();
    mc::EngineConfig cfg;
    for (bool mutated : {true, false}) {
        const Circuit w = build_wrapper(synth_encoder(s),
                                        synth_decoder(s, mutated ? DecoderMutation::OneHotOverlap : DecoderMutation::None));
        const auto props = build_core_properties(w, s);
        const Property& onehot = props.front();
        const auto t0 = Clock::now();
        const auto r = mc::k_induction(w, onehot, {}, cfg);
        const double dt = seconds_since(t0);
        o.require(dt < 120, "one-hot check over 2 min");
        if (mutated) {
            o.require(r.verdict == mc::Verdict::Cex, "mutated decoder: " + verdict(r.verdict));
            if (r.trace) {
                const mc::Trace back = mc::parse_trace(mc::serialize_trace(*r.trace));
                const auto rr = mc::replay(w, onehot, back);
                o.require(rr.consistent && rr.violates, "trace does not replay");
                const BitVec mask = back.inputs[0].at("cw_i") ^ back.outputs[0].at("cw_o");
                o.note("mutated: cex at depth " + std::to_string(r.bound) + ", mask weight " +
                       std::to_string(mask.weight()) + ", replay ok");
            } else {
                o.require(false, "no trace");
            }
        } else {
            o.require(r.verdict == mc::Verdict::Proven, "unmutated decoder: " + verdict(r.verdict));
            o.note("unmutated: proven n=" + std::to_string(r.bound));
        }
    }
}

void c6(Outcome& o) {
    const CodeSpec s = bch16();
    const PipelineSchedule sched{2, 1, 1};
    const Circuit core = build_sequential_core(s, sched);
    auto model = std::make_shared<const Circuit>(synth_encoder(s));
    const Property eq = build_equivalence_property(core, model);
    const auto cons = build_sequential_assumptions(core);
    mc::EngineConfig cfg;
    cfg.k_max = 32;

    const auto bare = mc::k_induction(core, eq, {}, cfg);
    o.require(bare.verdict == mc::Verdict::InductionCex, "without constraints: " + verdict(bare.verdict));
    if (bare.trace) {
        const auto rr = mc::replay(core, eq, *bare.trace);
        o.require(rr.consistent && rr.violates, "induction trace does not replay");
        auto lookup = [&](const std::string& port, std::size_t cyc) {
            if (auto it = bare.trace->inputs[cyc].find(port); it != bare.trace->inputs[cyc].end()) return it->second;
            return rr.outputs[cyc].at(port);
        };
        std::string broken;
        for (const auto& c : cons)
            if (!evaluate(c.expr, lookup, 0).get(0)) broken += (broken.empty() ? "" : ",") + c.name;
        o.require(!broken.empty(), "initial state of the induction trace satisfies both constraints");
        o.note("unconstrained: induction_cex at n=" + std::to_string(bare.bound) + ", cycle 0 dec=" +
               decoder_stage_name(rr.outputs[0].at("dec_state_o"), sched) + " violates " + broken);
    }
    const auto constrained = mc::k_induction(core, eq, cons, cfg);
    o.require(constrained.verdict == mc::Verdict::Proven && constrained.bound <= 32,
              "with constraints: " + verdict(constrained.verdict));
    o.note("constrained: proven n=" + std::to_string(constrained.bound));

    // The stand-alone pipelined encoder needs no environment constraints.
    const Circuit pipe = pipeline(*model, sched);
    const auto pr = mc::k_induction(pipe, build_equivalence_property(pipe, model), {}, cfg);
    o.require(pr.verdict == mc::Verdict::Proven, "pipelined encoder: " + verdict(pr.verdict));
    o.note("pipeline(2,1,1): proven n=" + std::to_string(pr.bound));
}

// Clause as (vars mask, positive-literal mask); falsified when every literal is false.
struct PackedClause {
    std::uint32_t vars = 0, positive = 0;
    bool tautology = false;
};

bool brute_sat(const sat::Cnf& cnf) {
    std::vector<PackedClause> cs;
    for (const auto& c : cnf.clauses) {
        PackedClause p;
        for (auto l : c) {
            const std::uint32_t bit = 1u << l.var();
            if ((p.vars & bit) && (((p.positive & bit) != 0) == l.negated())) p.tautology = true;
            p.vars |= bit;
            if (!l.negated()) p.positive |= bit;
        }
        if (!p.tautology) cs.push_back(p);
    }
    for (std::uint32_t x = 0; x < (1u << cnf.num_vars); ++x) {
        bool ok = true;
        for (const auto& c : cs)
            if ((x & c.vars) == (c.vars & ~c.positive)) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

sat::Cnf pigeonhole(std::size_t pigeons, std::size_t holes) {
    sat::Cnf cnf;
    cnf.num_vars = pigeons * holes;
    auto v = [&](std::size_t p, std::size_t h) { return static_cast<sat::Var>(p * holes + h); };
    for (std::size_t p = 0; p < pigeons; ++p) {
        sat::Clause c;
        for (std::size_t h = 0; h < holes; ++h) c.push_back(sat::pos(v(p, h)));
        cnf.clauses.push_back(c);
    }
    for (std::size_t h = 0; h < holes; ++h)
        for (std::size_t p = 0; p < pigeons; ++p)
            for (std::size_t q = p + 1; q < pigeons; ++q) cnf.clauses.push_back({sat::neg(v(p, h)), sat::neg(v(q, h))});
    return cnf;
}

sat::SolveResult run_solver(const sat::Cnf& cnf) {
    sat::Solver s;
    while (s.num_vars() < cnf.num_vars) s.new_var();
    for (const auto& c : cnf.clauses) s.add_clause(c);
    return s.solve();
}

bool model_ok(const sat::Cnf& cnf, const std::vector<bool>& m) {
    for (const auto& c : cnf.clauses) {
        bool sat = false;
        for (auto l : c) sat |= m.at(l.var()) != l.negated();
        if (!sat) return false;
    }
    return true;
}

void c7(Outcome& o) {
    std::mt19937_64 rng(0xC7);
    std::size_t disagree = 0, bad_models = 0, n_sat = 0, n_unsat = 0;
    for (int it = 0; it < 1000; ++it) {
        sat::Cnf cnf;
        cnf.num_vars = 3 + rng() % 18;
        // Clause/variable ratios around the 3-SAT threshold.
        const std::size_t m = 1 + rng() % (static_cast<std::size_t>(6.5 * static_cast<double>(cnf.num_vars)));
        for (std::size_t i = 0; i < m; ++i) {
            sat::Clause c;
            for (int j = 0; j < 3; ++j) c.push_back(sat::Lit(static_cast<sat::Var>(rng() % cnf.num_vars), rng() & 1u));
            cnf.clauses.push_back(c);
        }
        const auto r = run_solver(cnf);
        const bool expected = brute_sat(cnf);
        if ((r.status == sat::Status::Sat) != expected || r.status == sat::Status::Unknown) ++disagree;
        if (r.status == sat::Status::Sat) {
            ++n_sat;
            if (!model_ok(cnf, r.model)) ++bad_models;
        } else {
            ++n_unsat;
        }
    }
    o.require(disagree == 0, std::to_string(disagree) + " disagreements");
    o.require(bad_models == 0, std::to_string(bad_models) + " bad models");
    for (auto [p, h] : {std::pair{4, 3}, std::pair{5, 4}}) {
        const sat::Cnf php = pigeonhole(p, h);
        const bool unsat = run_solver(php).status == sat::Status::Unsat;
        o.require(unsat, "PHP(" + std::to_string(p) + "," + std::to_string(h) + ") not unsat");
        o.require(!brute_sat(php), "brute force finds PHP satisfiable");
    }
    o.note("1000 random 3-CNFs (" + std::to_string(n_sat) + " sat, " + std::to_string(n_unsat) +
           " unsat), PHP(4,3) PHP(5,4) unsat");
}

void c8(Outcome& o) {
    std::mt19937_64 rng(0xC8);
    const std::vector<CodeSpec> codes{build_hamming(3), build_hamming(4), extend_overall_parity(build_hamming(3)),
                                      build_hsiao(16), build_bch(4, 2), bch16(), bch32()};
    std::size_t total = 0;
    for (const auto& s : codes) {
        const Circuit enc = synth_encoder(s), dec = synth_decoder(s);
        std::size_t mism = 0;

        std::vector<BitVec> ds;
        if (s.k <= 16)
            for (std::uint64_t d = 0; d < (std::uint64_t{1} << s.k); ++d) ds.push_back(BitVec::from_uint(s.k, d));
        for (int i = 0; i < 10000; ++i) ds.push_back(testing::random_bits(rng, s.k));
        const auto cws = eval_many(enc, "data_i", ds);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            const BitVec ref = encode_ref(s, ds[i]);
            if (cws[i].at("cw_o") != ref) ++mism;
            if (i % 97 == 0 && !testing::naive_mul(s.h, ref).is_zero()) ++mism;
        }

        std::vector<BitVec> data, rx;
        if (s.k <= 16) {
            const BitVec fixed = draw_fixed_data(s.k, kDefaultSeed);
            const BitVec cw = encode_ref(s, fixed);
            std::function<void(std::size_t, std::size_t, BitVec&)> sweep = [&](std::size_t from, std::size_t left, BitVec& m) {
                data.push_back(fixed);
                rx.push_back(cw ^ m);
                if (left == 0) return;
                for (std::size_t j = from; j < s.n; ++j) {
                    m.set(j);
                    sweep(j + 1, left - 1, m);
                    m.set(j, false);
                }
            };
            BitVec m(s.n);
            sweep(0, s.t_detect, m);
        }
        const std::size_t swept = rx.size();
        for (int i = 0; i < 10000; ++i) {
            data.push_back(testing::random_bits(rng, s.k));
            rx.push_back(encode_ref(s, data.back()) ^ random_mask(rng, s.n, rng() % (s.t_detect + 1)));
        }
        const auto outs = eval_many(dec, "cw_i", rx);
        for (std::size_t i = 0; i < rx.size(); ++i) {
            const DecodeResult ref = decode_ref(s, rx[i]);
            if (raised_flag(s, outs[i]) != ref.flag || outs[i].at("data_o") != ref.data ||
                outs[i].at("ecc_o") != ref.ecc || outs[i].at("syn_o") != ref.syndrome)
                ++mism;
            const std::size_t w = (rx[i] ^ encode_ref(s, data[i])).weight();
            if (!decode_matches(s, data[i], w, ref)) ++mism;
        }
        total += ds.size() + rx.size();
        o.require(mism == 0, s.id() + " " + std::to_string(mism) + " mismatches");
        o.note(s.id() + ": " + std::to_string(ds.size()) + " enc, " + std::to_string(swept) + " swept + 10000 random dec");
    }
    o.note(std::to_string(total) + " cases, 0 mismatches");
}

struct Pair {
    std::string label;
    std::shared_ptr<const Circuit> system;
    Property target;
    std::vector<Property> constraints;
};

Circuit latent() {
    Circuit c("latent");
    const NodeId in = c.add_input_bit("in");
    const NodeId u = c.add_register(false);
    c.set_next(u, u);
    const NodeId b = c.add_register(false);
    c.set_next(b, c.add_and(u, in));
    c.add_output_bit("b", b);
    return c;
}

Circuit counter2() {
    Circuit c("cnt");
    const NodeId en = c.add_input_bit("en");
    const NodeId r0 = c.add_register(false), r1 = c.add_register(false);
    c.set_next(r0, c.add_xor(r0, en));
    c.set_next(r1, c.add_xor(r1, c.add_and(r0, en)));
    c.add_output("c", {r0, r1});
    return c;
}

std::vector<Pair> regression_set() {
    std::vector<Pair> out;
    auto wrapper_pairs = [&](const CodeSpec& s, DecoderMutation mut, const std::vector<std::string>& names) {
        auto w = std::make_shared<const Circuit>(build_wrapper(synth_encoder(s), synth_decoder(s, mut)));
        auto props = build_core_properties(*w, s);
        const Property fixed = make_constraint(
            "fixed_data", ex::eq(ex::signal(*w, "data_i"), ex::constant(draw_fixed_data(s.k, kDefaultSeed))));
        for (const auto& p : props)
            if (std::find(names.begin(), names.end(), p.name) != names.end())
                out.push_back({s.id() + (mut == DecoderMutation::None ? "" : "/mutated") + " " + p.name, w, p, {fixed}});
    };
    wrapper_pairs(build_hamming(3), DecoderMutation::None, {"flags_one_hot", "detect_w0", "detect_w1", "no_flag_means_clean"});
    wrapper_pairs(extend_overall_parity(build_hamming(3)), DecoderMutation::None, {"flags_one_hot", "detect_w2"});
    wrapper_pairs(build_hamming(3), DecoderMutation::OneHotOverlap, {"flags_one_hot"});
    wrapper_pairs(bch16(), DecoderMutation::None, {"flags_one_hot"});

    auto core_pair = [&](const CodeSpec& s, PipelineSchedule sched, bool mutated_model) {
        auto core = std::make_shared<const Circuit>(build_sequential_core(s, sched));
        auto model = std::make_shared<const Circuit>(mutated_model ? synth_mutated_encoder(s) : synth_encoder(s));
        std::ostringstream label;
        label << s.id() << " core(" << sched.encode_cycles << "," << sched.detect_cycles << "," << sched.correct_cycles
              << ")" << (mutated_model ? " vs mutated model" : "") << " enc_equivalence";
        out.push_back({label.str(), core, build_equivalence_property(*core, model), build_sequential_assumptions(*core)});
    };
    core_pair(build_hamming(3), {2, 1, 1}, false);
    core_pair(build_hamming(3), {2, 1, 1}, true);
    core_pair(extend_overall_parity(build_hamming(3)), {1, 1, 1}, false);
    core_pair(extend_overall_parity(build_hamming(3)), {3, 1, 1}, false);
    core_pair(extend_overall_parity(build_hamming(3)), {2, 2, 1}, false);
    core_pair(bch16(), {2, 1, 1}, false);

    for (std::size_t lat : {2u, 4u}) {
        const CodeSpec s = build_hamming(3);
        auto model = std::make_shared<const Circuit>(synth_encoder(s));
        auto p = std::make_shared<const Circuit>(pipeline(*model, lat));
        out.push_back({"hamming pipeline(" + std::to_string(lat) + ") enc_equivalence", p,
                       build_equivalence_property(*p, model),
                       {make_constraint("no_reset", ex::signal(*p, "rst_n_i"))}});
    }

    auto lat = std::make_shared<const Circuit>(latent());
    out.push_back({"latent b_low", lat, make_target("b_low", ex::lnot(ex::signal(*lat, "b"))),
                   {make_constraint("in_low", ex::lnot(ex::signal(*lat, "in")))}});
    auto cnt = std::make_shared<const Circuit>(counter2());
    const auto three = ex::eq(ex::signal(*cnt, "c"), ex::constant(BitVec::from_string("11")));
    out.push_back({"counter never3", cnt, make_target("never3", ex::lnot(three)),
                   {make_constraint("en_low", ex::lnot(ex::signal(*cnt, "en")))}});
    out.push_back({"counter taut", cnt, make_target("taut", ex::lor(three, ex::lnot(three))),
                   {make_constraint("en_low", ex::lnot(ex::signal(*cnt, "en")))}});
    const auto two = ex::eq(ex::signal(*cnt, "c"), ex::constant(BitVec::from_string("01")));
    out.push_back({"counter never steps from 2 to 1", cnt,
                   make_target("two_step", ex::implies(two, ex::lnot(ex::eq(ex::signal(*cnt, "c", 1),
                                                                           ex::constant(BitVec::from_string("10")))))),
                   {make_constraint("en_low", ex::lnot(ex::signal(*cnt, "en")))}});
    return out;
}

void c9(Outcome& o) {
    const auto pairs = regression_set();
    o.require(pairs.size() == 20, "regression set has " + std::to_string(pairs.size()) + " pairs");
    std::size_t proven_plain = 0;
    for (const auto& p : pairs) {
        auto run = [&](bool constrained, bool unique) {
            mc::EngineConfig cfg;
            cfg.k_max = 32;
            cfg.unique_states = unique;
            return mc::k_induction(*p.system, p.target, constrained ? p.constraints : std::vector<Property>{}, cfg);
        };
        const auto a = run(false, false), b = run(false, true), c = run(true, false), d = run(true, true);
        if (a.verdict == mc::Verdict::Proven) {
            ++proven_plain;
            o.require(c.verdict == mc::Verdict::Proven, p.label + ": constraints turned proven into " + verdict(c.verdict));
            o.require(b.verdict == mc::Verdict::Proven && b.bound <= a.bound,
                      p.label + ": unique_states weakened proven to " + verdict(b.verdict));
        }
        if (c.verdict == mc::Verdict::Proven)
            o.require(d.verdict == mc::Verdict::Proven && d.bound <= c.bound,
                      p.label + ": unique_states weakened constrained proof to " + verdict(d.verdict));
        if (b.verdict == mc::Verdict::Proven)
            o.require(d.verdict == mc::Verdict::Proven, p.label + ": constraints turned proven into " + verdict(d.verdict));
        std::printf("  %-58s plain=%s/%zu uniq=%s/%zu cons=%s/%zu both=%s/%zu\n", p.label.c_str(),
                    verdict(a.verdict).c_str(), a.bound, verdict(b.verdict).c_str(), b.bound, verdict(c.verdict).c_str(),
                    c.bound, verdict(d.verdict).c_str(), d.bound);
        std::fflush(stdout);
    }
    o.note(std::to_string(pairs.size()) + " pairs, " + std::to_string(proven_plain) + " proven without strengthening");
}

}  // namespace

int main() {
    criterion(1, "pattern count", 1.0, c1);
    criterion(2, "flagship code oracle", 10.0, c2);
    criterion(3, "linearity lemmas", 300.0, c3);
    criterion(4, "fixed-data reduction", 1800.0, c4);
    criterion(5, "one-hot bug", 240.0, c5);
    criterion(6, "sequential equivalence and constraints", 1800.0, c6);
    criterion(7, "solver correctness", 300.0, c7);
    criterion(8, "circuit/oracle equivalence", 300.0, c8);
    criterion(9, "monotonicity", 600.0, c9);
    std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
