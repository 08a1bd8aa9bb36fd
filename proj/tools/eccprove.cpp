#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"
#include "eccprove/run.hpp"
#include "eccprove/sat.hpp"

namespace fs = std::filesystem;
using namespace eccprove;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitBudget = 65;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

struct Flags {
    std::string config_file;
    RunConfig cfg;
    std::string pipeline;
    std::string replay;
    bool no_lemmas = false;
    bool no_seq_constraints = false;
    bool unique = false;
    bool no_unique = false;
    bool quiet = false;
};

// Options shared by verify and oracle.
void add_code_options(CLI::App* app, Flags& f) {
    app->add_option("--config", f.config_file, "JSON config file; flags given on the command line win");
    app->add_option("--family", f.cfg.family, "hamming | ext-hamming | hsiao | bch | ext-bch");
    app->add_option("--m", f.cfg.m, "field degree / Hamming check bits");
    app->add_option("--t", f.cfg.t, "BCH designed correction capability");
    app->add_option("--k", f.cfg.k, "data bits (hsiao)");
    app->add_option("--seed", f.cfg.seed, "seed of the fixed data word (ECC_PROVER_SEED overrides the default)");
    app->add_option("--jobs", f.cfg.jobs, "worker threads");
    app->add_option("--out", f.cfg.out, "output directory");
    app->add_flag("--quiet", f.quiet, "no per-property lines on stdout");
}

// Config file first, then environment, then explicit flags.
RunConfig resolve(CLI::App* app, const Flags& f) {
    RunConfig c;
    if (!f.config_file.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(f.config_file));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput("config " + f.config_file + ": " + e.what());
        }
        c = run_config_from_json(j);
    }
    if (const char* env = std::getenv("ECC_PROVER_SEED")) {
        try {
            c.seed = std::stoull(env, nullptr, 0);
        } catch (const std::exception&) {
            throw InvalidInput(std::string("ECC_PROVER_SEED is not a number: ") + env);
        }
    }
    auto given = [&](const char* name) { return app->get_option_no_throw(name) && app->count(name) > 0; };
    const RunConfig& g = f.cfg;
    if (given("--family")) c.family = g.family;
    if (given("--m")) c.m = g.m;
    if (given("--t")) c.t = g.t;
    if (given("--k")) c.k = g.k;
    if (given("--seed")) c.seed = g.seed;
    if (given("--jobs")) c.jobs = g.jobs;
    if (given("--out")) c.out = g.out;
    if (given("--plan")) c.plan = g.plan;
    if (given("--fixed-data")) c.fixed_data = true;
    if (given("--no-lemmas")) c.lemmas = false;
    if (given("--pipeline")) c.pipeline = parse_schedule(f.pipeline);
    if (given("--no-seq-constraints")) c.seq_constraints = false;
    if (given("--mutate")) c.mutate = g.mutate;
    if (given("--k-max")) c.k_max = g.k_max;
    if (given("--budget")) c.budget = g.budget;
    if (given("--unique-states")) c.unique_states = true;
    if (given("--no-unique-states")) c.unique_states = false;
    if (given("--solver-seed")) c.solver_seed = g.solver_seed;
    if (given("--dump-cnf")) c.dump_cnf = true;
    if (given("--max-weight")) c.max_weight = g.max_weight;
    if (given("--data")) c.data_mode = g.data_mode;
    c.validate();
    return c;
}

std::string to_fs_name(const std::string& s) {
    std::string r = s;
    for (auto& ch : r)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '-') ch = '_';
    return r;
}

int run_verify(const RunConfig& c, bool quiet) {
    const Session s = build_session(c);
    s.plan.validate();
    const fs::path out(c.out);
    fs::create_directories(out);
    write_file(out / "system.netlist", s.plan.system->serialize());
    write_file(out / "system.aag", s.plan.system->to_aiger());

    mc::EngineConfig ecfg = engine_config(c);
    if (!quiet)
        std::cout << s.spec.id() << ": " << s.plan.properties.size() << " properties on " << s.plan.system->name()
                  << " (" << s.plan.system->gate_count() << " gates, " << s.plan.system->registers().size()
                  << " registers)" << std::endl;

    if (c.dump_cnf) {
        std::vector<Property> constraints;
        for (const auto& p : s.plan.properties)
            if (p.role == PropertyRole::Constraint) constraints.push_back(p);
        for (const auto& p : s.plan.properties)
            if (p.role != PropertyRole::Constraint)
                write_file(out / (to_fs_name(p.name) + ".cnf"),
                           sat::export_dimacs(mc::base_query_cnf(*s.plan.system, p, constraints, 0)));
    }

    const mc::Report rep = mc::prove_plan(s.plan, ecfg);
    nlohmann::json report = build_report(c, s, rep);
    nlohmann::json artifacts = {"system.netlist", "system.aag"};
    const std::string config_line = to_json(c).dump();
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const auto& e = rep.entries[i];
        if (!quiet) {
            std::cout << "  " << e.property << ": " << mc::to_string(e.result.verdict);
            if (e.result.verdict == mc::Verdict::Proven) std::cout << " (n=" << e.result.bound << ")";
            if (e.degraded()) std::cout << " [degraded]";
            std::cout << std::endl;
        }
        if (!e.result.trace) continue;
        mc::Trace t = *e.result.trace;
        t.meta["config"] = config_line;
        t.meta["verdict"] = mc::to_string(e.result.verdict);
        const std::string file = to_fs_name(e.property) + ".trace";
        write_file(out / file, mc::serialize_trace(t, [&](std::size_t cyc) { return stage_annotation(s, t, cyc); }));
        report["results"][i]["trace"]["file"] = file;
        artifacts.push_back(file);
    }
    if (c.dump_cnf)
        for (const auto& p : s.plan.properties)
            if (p.role != PropertyRole::Constraint) artifacts.push_back(to_fs_name(p.name) + ".cnf");
    report["artifacts"] = artifacts;
    write_file(out / "report.json", report.dump(2) + "\n");
    const int code = exit_code(rep);
    if (!quiet) std::cout << "report: " << (out / "report.json").string() << " exit " << code << std::endl;
    return code;
}

int run_replay(const std::string& path) {
    const mc::Trace t = mc::parse_trace(read_file(path));
    const auto it = t.meta.find("config");
    if (it == t.meta.end()) throw InvalidInput(path + ": trace carries no run configuration");
    RunConfig c = run_config_from_json(nlohmann::json::parse(it->second));
    const Session s = build_session(c);
    const Property* p = s.plan.find(t.property);
    if (!p) throw InvalidInput(path + ": property " + t.property + " is not in the plan");
    const mc::ReplayResult rr = mc::replay(*s.plan.system, *p, t);
    std::cout << "replay " << path << ": property " << t.property << ", " << t.length() << " cycles, "
              << (t.rooted_at_reset ? "from reset" : "from an arbitrary state") << ", consistent "
              << (rr.consistent ? "yes" : "no") << ", violated at cycle " << t.violation_frame << " "
              << (rr.violates ? "yes" : "no") << std::endl;
    return rr.consistent && rr.violates ? 0 : 1;
}

int run_oracle(const RunConfig& c, bool quiet) {
    const CodeSpec spec = build_code(c);
    const std::size_t w = c.max_weight == 0 ? spec.t_detect : c.max_weight;
    if (w > spec.t_detect)
        throw BudgetExceeded("max weight " + std::to_string(w) + " is beyond t_detect " +
                             std::to_string(spec.t_detect) + " of " + spec.id() + "; nothing is promised there");
    const ExhaustiveReport rep =
        exhaustive_check(spec, w, c.data_mode == "all" ? DataMode::All : DataMode::Fixed, c.seed, c.jobs);
    const fs::path out(c.out);
    fs::create_directories(out);
    nlohmann::json j = to_json(rep);
    j["config"] = to_json(c);
    write_file(out / "oracle.json", j.dump(2) + "\n");
    if (!quiet) {
        std::cout << spec.id() << ": " << rep.total_patterns() << " patterns, " << rep.total_cases() << " cases, "
                  << (rep.all_pass() ? "all pass" : "FAILURES") << std::endl;
        for (const auto& ws : rep.per_weight)
            std::cout << "  w=" << ws.weight << " patterns " << ws.patterns << " pass " << ws.pass << " fail " << ws.fail
                      << std::endl;
    }
    return rep.all_pass() ? 0 : 2;
}

int run_solve(const std::string& path, std::uint64_t budget) {
    const sat::Cnf cnf = sat::import_dimacs(read_file(path));
    sat::Solver solver(sat::SolverOptions{0, budget});
    while (solver.num_vars() < cnf.num_vars) solver.new_var();
    for (const auto& cl : cnf.clauses) solver.add_clause(cl);
    const auto r = solver.solve();
    switch (r.status) {
        case sat::Status::Sat: {
            std::cout << "s SATISFIABLE\nv";
            for (std::size_t v = 0; v < cnf.num_vars; ++v) std::cout << ' ' << (r.model[v] ? "" : "-") << v + 1;
            std::cout << " 0" << std::endl;
            return 10;
        }
        case sat::Status::Unsat: std::cout << "s UNSATISFIABLE" << std::endl; return 20;
        case sat::Status::Unknown: std::cout << "s UNKNOWN" << std::endl; return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Formal and exhaustive verification of ECC encoder/decoder circuits"};
    app.require_subcommand(1);
    Flags f;

    auto* verify = app.add_subcommand("verify", "build the plan, prove it, write report.json and traces");
    add_code_options(verify, f);
    verify->add_option("--plan", f.cfg.plan, "core | full");
    verify->add_flag("--fixed-data", f.cfg.fixed_data, "pin data_i to a seeded word (needs the lemmas to be sound)");
    verify->add_flag("--no-lemmas", f.no_lemmas, "skip the linearity lemmas");
    verify->add_option("--pipeline", f.pipeline, "E,D,C cycles: verify the sequential core instead");
    verify->add_flag("--no-seq-constraints", f.no_seq_constraints, "drop the IDLE-start and no-overlap constraints");
    verify->add_option("--mutate", f.cfg.mutate, "one-hot | l2 | model");
    verify->add_option("--k-max", f.cfg.k_max, "induction depth limit");
    verify->add_option("--budget", f.cfg.budget, "conflict budget per property (0 = none)");
    verify->add_flag("--unique-states", f.unique, "state distinctness in the induction step (default)");
    verify->add_flag("--no-unique-states", f.no_unique, "no state distinctness");
    verify->add_option("--solver-seed", f.cfg.solver_seed, "SAT solver seed (0 = no randomization)");
    verify->add_flag("--dump-cnf", f.cfg.dump_cnf, "write the depth-0 base query of each property as DIMACS");
    verify->add_option("--replay", f.replay, "replay a trace file instead of verifying");

    auto* oracle = app.add_subcommand("oracle", "exhaustive simulation against the reference decoder");
    add_code_options(oracle, f);
    oracle->add_option("--max-weight", f.cfg.max_weight, "largest mask weight (default t_detect)");
    oracle->add_option("--data", f.cfg.data_mode, "all | fixed");

    std::string trace_path;
    auto* replay = app.add_subcommand("replay", "re-simulate a trace file and check the violation");
    replay->add_option("trace", trace_path, "trace file")->required();

    std::size_t cn = 0, cw = 0;
    auto* count = app.add_subcommand("count", "number of error patterns of weight 1..w in n bits");
    count->add_option("--n", cn, "word length")->required();
    count->add_option("--w", cw, "largest weight")->required();

    std::string cnf_path;
    std::uint64_t solve_budget = 0;
    auto* solve = app.add_subcommand("solve", "solve a DIMACS file");
    solve->add_option("cnf", cnf_path, "DIMACS file")->required();
    solve->add_option("--budget", solve_budget, "conflict budget (0 = none)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*verify) {
            if (!f.replay.empty()) return run_replay(f.replay);
            if (f.unique && f.no_unique) throw InvalidInput("--unique-states and --no-unique-states conflict");
            return run_verify(resolve(verify, f), f.quiet);
        }
        if (*oracle) return run_oracle(resolve(oracle, f), f.quiet);
        if (*replay) return run_replay(trace_path);
        if (*count) {
            std::cout << count_patterns(cn, cw).str() << std::endl;
            return 0;
        }
        if (*solve) return run_solve(cnf_path, solve_budget);
    } catch (const BudgetExceeded& e) {
        std::cerr << "eccprove: " << e.what() << std::endl;
        return kExitBudget;
    } catch (const InvalidInput& e) {
        std::cerr << "eccprove: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "eccprove: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "eccprove: " << e.what() << std::endl;
        return 1;
    }
    return kExitUsage;
}
