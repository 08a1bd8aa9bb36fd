#include "eccprove/run.hpp"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"

namespace eccprove {

void RunConfig::validate() const {
    const CodeFamily fam = code_family_from_string(family);
    if (fam == CodeFamily::Hsiao && k == 0) throw InvalidInput("hsiao needs --k");
    if ((fam == CodeFamily::Bch || fam == CodeFamily::ExtendedBch) && t == 0) throw InvalidInput("bch needs --t >= 1");
    if (plan != "core" && plan != "full") throw InvalidInput("--plan must be core or full");
    if (mutate != "none" && mutate != "one-hot" && mutate != "l2" && mutate != "model")
        throw InvalidInput("--mutate must be one-hot, l2 or model");
    if (data_mode != "all" && data_mode != "fixed") throw InvalidInput("--data must be all or fixed");
    if (!seq_constraints && !pipeline) throw InvalidInput("--no-seq-constraints needs --pipeline");
    if (mutate == "model" && !pipeline) throw InvalidInput("--mutate model needs --pipeline");
    if (pipeline && (mutate == "one-hot" || mutate == "l2"))
        throw InvalidInput("--mutate " + mutate + " applies to the combinational plan, not --pipeline");
    if (pipeline && fixed_data) throw InvalidInput("--fixed-data applies to the combinational plan");
    if (fixed_data && plan != "full") throw InvalidInput("--fixed-data needs --plan full");
    if (mutate == "l2" && !lemmas) throw InvalidInput("--mutate l2 needs lemmas");
    if (mutate == "l2" && plan != "full") throw InvalidInput("--mutate l2 needs --plan full");
    if (k_max == 0) throw InvalidInput("--k-max must be >= 1");
    if (jobs == 0) throw InvalidInput("--jobs must be >= 1");
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j{{"family", c.family},
                     {"m", c.m},
                     {"t", c.t},
                     {"k", c.k},
                     {"plan", c.plan},
                     {"fixed_data", c.fixed_data},
                     {"lemmas", c.lemmas},
                     {"seq_constraints", c.seq_constraints},
                     {"mutate", c.mutate},
                     {"k_max", c.k_max},
                     {"budget", c.budget},
                     {"unique_states", c.unique_states},
                     {"seed", c.seed},
                     {"solver_seed", c.solver_seed},
                     {"jobs", c.jobs},
                     {"max_weight", c.max_weight},
                     {"data_mode", c.data_mode},
                     {"dump_cnf", c.dump_cnf}};
    if (c.pipeline)
        j["pipeline"] = std::to_string(c.pipeline->encode_cycles) + "," + std::to_string(c.pipeline->detect_cycles) +
                        "," + std::to_string(c.pipeline->correct_cycles);
    else
        j["pipeline"] = nullptr;
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig c) {
    if (!j.is_object()) throw InvalidInput("config: expected a JSON object");
    auto take = [&](const char* key, auto& field) {
        if (auto it = j.find(key); it != j.end() && !it->is_null()) {
            try {
                it->get_to(field);
            } catch (const nlohmann::json::exception& e) {
                throw InvalidInput(std::string("config: bad value for ") + key + ": " + e.what());
            }
        }
    };
    take("family", c.family);
    take("m", c.m);
    take("t", c.t);
    take("k", c.k);
    take("plan", c.plan);
    take("fixed_data", c.fixed_data);
    take("lemmas", c.lemmas);
    take("seq_constraints", c.seq_constraints);
    take("mutate", c.mutate);
    take("k_max", c.k_max);
    take("budget", c.budget);
    take("unique_states", c.unique_states);
    take("seed", c.seed);
    take("solver_seed", c.solver_seed);
    take("jobs", c.jobs);
    take("max_weight", c.max_weight);
    take("data_mode", c.data_mode);
    take("dump_cnf", c.dump_cnf);
    take("out", c.out);
    if (auto it = j.find("pipeline"); it != j.end()) {
        if (it->is_null())
            c.pipeline.reset();
        else if (it->is_string())
            c.pipeline = parse_schedule(it->get<std::string>());
        else
            throw InvalidInput("config: pipeline must be \"E,D,C\" or null");
    }
    for (const auto& [key, value] : j.items()) {
        static const char* known[] = {"family", "m", "t", "k", "plan", "fixed_data", "lemmas", "seq_constraints",
                                      "mutate", "k_max", "budget", "unique_states", "seed", "solver_seed", "jobs",
                                      "max_weight", "data_mode", "dump_cnf", "out", "pipeline"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw InvalidInput("config: unknown key '" + key + "'");
    }
    return c;
}

CodeSpec build_code(const RunConfig& c) {
    switch (code_family_from_string(c.family)) {
        case CodeFamily::Hamming: return build_hamming(c.m);
        case CodeFamily::ExtendedHamming: return extend_overall_parity(build_hamming(c.m));
        case CodeFamily::Hsiao: return build_hsiao(c.k);
        case CodeFamily::Bch: return build_bch(c.m, c.t);
        case CodeFamily::ExtendedBch: return extend_overall_parity(build_bch(c.m, c.t));
    }
    throw InvalidInput("unknown family");
}

Session build_session(const RunConfig& c) {
    c.validate();
    Session s;
    s.spec = build_code(c);
    s.fixed_data = draw_fixed_data(s.spec.k, c.seed);
    auto& props = s.plan.properties;

    if (c.pipeline) {
        auto core = std::make_shared<Circuit>(build_sequential_core(s.spec, *c.pipeline));
        auto model = std::make_shared<const Circuit>(c.mutate == "model" ? synth_mutated_encoder(s.spec)
                                                                         : synth_encoder(s.spec));
        s.plan.system = core;
        s.schedule = c.pipeline;
        if (c.seq_constraints)
            for (auto& p : build_sequential_assumptions(*core)) props.push_back(std::move(p));
        props.push_back(build_equivalence_property(*core, model));
        return s;
    }

    const auto mutation = c.mutate == "one-hot" ? DecoderMutation::OneHotOverlap : DecoderMutation::None;
    auto w = std::make_shared<Circuit>(build_wrapper(synth_encoder(s.spec), synth_decoder(s.spec, mutation)));
    s.plan.system = w;
    auto core = build_core_properties(*w, s.spec);
    if (c.plan == "core") {
        props = std::move(core);
        return s;
    }
    if (c.lemmas)
        for (auto& p : build_linearity_lemmas(synth_syndrome(s.spec), s.spec, LemmaOptions{c.mutate == "l2"}))
            props.push_back(std::move(p));
    for (auto& p : core)
        if (p.name.rfind("detect_", 0) != 0) props.push_back(std::move(p));
    auto targets = c.fixed_data ? build_reduced_targets(*w, s.spec, s.fixed_data)
                                : build_detection_correction_targets(*w, s.spec);
    for (auto& p : targets) {
        if (!c.lemmas) p.depends_on.clear();
        props.push_back(std::move(p));
    }
    return s;
}

mc::EngineConfig engine_config(const RunConfig& c) {
    mc::EngineConfig e;
    e.k_max = c.k_max;
    e.conflict_budget = c.budget;
    e.unique_states = c.unique_states;
    e.seed = c.solver_seed;
    e.jobs = c.jobs;
    return e;
}

int exit_code(const mc::Report& r) {
    bool unresolved = false;
    for (const auto& e : r.entries) {
        if (e.result.verdict == mc::Verdict::Cex) return 2;
        if (e.result.verdict != mc::Verdict::Proven) unresolved = true;
    }
    return unresolved ? 3 : 0;
}

nlohmann::json build_report(const RunConfig& c, const Session& s, const mc::Report& r) {
    nlohmann::json results = nlohmann::json::array();
    std::map<std::string, std::size_t> counts;
    for (const auto& e : r.entries) {
        results.push_back(mc::to_json(e));
        ++counts[mc::to_string(e.result.verdict)];
    }
    nlohmann::json summary{{"properties", r.entries.size()}, {"exit_code", exit_code(r)}};
    for (const char* v : {"proven", "bounded", "cex", "induction_cex", "unknown"}) summary[v] = counts[v];
    nlohmann::json j{{"tool", "eccprove"},
                     {"config", to_json(c)},
                     {"code", to_json(s.spec)},
                     {"system",
                      {{"name", s.plan.system->name()},
                       {"gates", s.plan.system->gate_count()},
                       {"registers", s.plan.system->registers().size()}}},
                     {"plan", to_json(s.plan)},
                     {"results", results},
                     {"summary", summary}};
    if (c.fixed_data) j["fixed_data_hex"] = s.fixed_data.to_hex();
    if (!c.pipeline && c.plan == "full" && c.fixed_data && c.lemmas)
        j["analysis_space"] = {{"full", "2^" + std::to_string(s.spec.k) + " x " +
                                            count_patterns(s.spec.n, s.spec.t_detect).str()},
                               {"reduced", "1 x " + count_patterns(s.spec.n, s.spec.t_detect).str()}};
    return j;
}

std::string stage_annotation(const Session& s, const mc::Trace& t, std::size_t cycle) {
    if (cycle >= t.outputs.size()) return {};
    const auto& out = t.outputs[cycle];
    const auto enc = out.find("enc_state_o");
    const auto dec = out.find("dec_state_o");
    if (enc == out.end() || dec == out.end()) return {};
    if (!s.schedule) return {};
    return "enc=" + encoder_stage_name(enc->second) + " dec=" + decoder_stage_name(dec->second, *s.schedule);
}

}  // namespace eccprove
