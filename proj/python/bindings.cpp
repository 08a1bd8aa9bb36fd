#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "eccprove/error.hpp"
#include "eccprove/run.hpp"
#include "eccprove/sat.hpp"

namespace py = pybind11;
using namespace eccprove;

namespace {

RunConfig config_of(const std::string& json_text) {
    return run_config_from_json(json_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(json_text));
}

std::string verify_json(const std::string& cfg_text) {
    const RunConfig c = config_of(cfg_text);
    const Session s = build_session(c);
    mc::Report r;
    {
        py::gil_scoped_release release;
        r = mc::prove_plan(s.plan, engine_config(c));
    }
    return build_report(c, s, r).dump();
}

std::string oracle_json(const std::string& cfg_text) {
    const RunConfig c = config_of(cfg_text);
    const CodeSpec spec = build_code(c);
    const std::size_t w = c.max_weight == 0 ? spec.t_detect : c.max_weight;
    ExhaustiveReport rep;
    {
        py::gil_scoped_release release;
        rep = exhaustive_check(spec, w, c.data_mode == "all" ? DataMode::All : DataMode::Fixed, c.seed, c.jobs);
    }
    return to_json(rep).dump();
}

py::tuple solve(const std::vector<std::vector<int>>& clauses, std::size_t num_vars, std::uint64_t budget) {
    sat::Solver s(sat::SolverOptions{0, budget});
    for (const auto& c : clauses)
        for (int d : c) {
            if (d == 0) throw InvalidInput("solve: literal 0 inside a clause");
            num_vars = std::max<std::size_t>(num_vars, static_cast<std::size_t>(d < 0 ? -d : d));
        }
    while (s.num_vars() < num_vars) s.new_var();
    for (const auto& c : clauses) {
        sat::Clause cl;
        for (int d : c) cl.push_back(sat::Lit::from_dimacs(d));
        s.add_clause(cl);
    }
    const auto r = s.solve();
    std::vector<bool> model(r.model.begin(), r.model.end());
    return py::make_tuple(std::string(sat::to_string(r.status)), model);
}

}  // namespace

PYBIND11_MODULE(_eccprove, m) {
    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("count_patterns", [](std::size_t n, std::size_t w) { return count_patterns(n, w).str(); });
    m.def("code_json", [](const std::string& cfg) { return to_json(build_code(config_of(cfg))).dump(); });
    m.def("min_distance", [](const std::string& cfg) { return min_distance(build_code(config_of(cfg))); });
    m.def("encode", [](const std::string& cfg, const std::string& data) {
        return encode_ref(build_code(config_of(cfg)), BitVec::from_string(data)).to_string();
    });
    m.def("decode", [](const std::string& cfg, const std::string& received) {
        const CodeSpec spec = build_code(config_of(cfg));
        const DecodeResult r = decode_ref(spec, BitVec::from_string(received));
        return py::make_tuple(r.flag, r.data.to_string(), r.ecc.to_string(), r.syndrome.to_string());
    });
    m.def("verify_json", &verify_json);
    m.def("oracle_json", &oracle_json);
    m.def("solve", &solve, py::arg("clauses"), py::arg("num_vars") = 0, py::arg("budget") = 0);
}
