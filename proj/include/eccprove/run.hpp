#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "eccprove/codes.hpp"
#include "eccprove/mc.hpp"
#include "eccprove/oracle.hpp"
#include "eccprove/property.hpp"
#include "eccprove/synth.hpp"

namespace eccprove {

struct RunConfig {
    std::string family = "ext-bch";
    unsigned m = 4;
    std::size_t t = 3;
    /// Data width, Hsiao only.
    std::size_t k = 0;

    /// "core": one-hot, detect_w*, no_flag_means_clean.
    /// "full": lemmas, one-hot, no_flag_means_clean, detection and correction.
    std::string plan = "full";
    bool fixed_data = false;
    bool lemmas = true;
    std::optional<PipelineSchedule> pipeline;
    bool seq_constraints = true;
    /// none | one-hot | l2 | model
    std::string mutate = "none";

    std::size_t k_max = 32;
    std::uint64_t budget = 10'000'000;
    bool unique_states = true;
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t solver_seed = 0;
    std::size_t jobs = 1;

    /// Oracle: 0 means t_detect.
    std::size_t max_weight = 0;
    /// all | fixed
    std::string data_mode = "fixed";

    std::string out = "eccprove-out";
    bool dump_cnf = false;

    /// Rejects inconsistent flag combinations with InvalidInput.
    void validate() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Fields missing from `j` keep their value in `base`.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

CodeSpec build_code(const RunConfig& c);

struct Session {
    CodeSpec spec;
    VerificationPlan plan;
    BitVec fixed_data;
    std::optional<PipelineSchedule> schedule;
};

Session build_session(const RunConfig& c);
mc::EngineConfig engine_config(const RunConfig& c);

/// 0 all proven, 2 any counterexample, 3 anything else unresolved.
int exit_code(const mc::Report& r);

nlohmann::json build_report(const RunConfig& c, const Session& s, const mc::Report& r);

/// Per-cycle "enc=... dec=..." stage names for traces of the sequential core; empty otherwise.
std::string stage_annotation(const Session& s, const mc::Trace& t, std::size_t cycle);

}  // namespace eccprove
