#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "crosslink/config.hpp"
#include "crosslink/sim.hpp"

namespace crosslink::scenarios {

struct ScenarioResult {
    bool passed = true;
    std::vector<std::string> failures;
    std::string summary;
    std::string trace_text;
    Digest trace_digest;
    std::string metrics_csv;
    std::string conflicts_csv;  // tick,chain,address,key,winner
    std::string ledger_csv;     // closing ledger snapshot
    WorldMetrics metrics;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            failures.push_back(what);
        }
    }
};

// Built-in genesis documents; `--config` replaces them wholesale.
WorldConfig default_read_config();
ReadScenarioSpec default_read_spec();
WorldConfig default_write_config();
WriteScenarioSpec default_write_spec();
WorldConfig fuzz_config();
WorldConfig soak_config(TransportConfig transport);

ScenarioResult run_read(const WorldConfig& cfg, const ReadScenarioSpec& spec, std::uint64_t seed);
ScenarioResult run_write(const WorldConfig& cfg, const WriteScenarioSpec& spec,
                         std::uint64_t seed);

struct DosReport {
    std::uint64_t n_star = 0;    // max{ n | T(n) <= A } by direct prefix summation
    std::uint64_t accepted = 0;  // sequential admissions until the first refusal
    std::uint64_t refused = 0;
    std::vector<FeeUnits> total_cost_curve;  // T(n) after each accepted invocation
    FeeUnits destination_load = 0;           // Comp(n*)
    bool capacity_exceeded = false;
    std::uint64_t pipeline_accepted = 0;  // full-pipeline flood cross-check (constant cost)
    bool pipeline_ran = false;
    std::string curve_csv;
};

ScenarioResult run_dos(const DoSExperimentConfig& dos, FeeUnits f_base, std::uint64_t seed,
                       bool with_pipeline, DosReport& report);

struct FuzzReport {
    std::size_t iterations = 0;
    std::size_t s_main_violations = 0;
    std::size_t unauthorized_accepted = 0;
    std::size_t outcome_mismatches = 0;
    std::string repro;  // seed/batch/prefix of the minimized failing run, if any
};

ScenarioResult run_fuzz(std::size_t iterations, std::size_t batch, std::uint64_t seed, int jobs,
                        FuzzReport& report);

struct SoakReport {
    std::size_t requests = 0;
    std::size_t local_txs = 0;
    std::size_t conflicts = 0;
    double wall_seconds = 0.0;
};

ScenarioResult run_soak(const WorldConfig& cfg, std::uint64_t seed, std::size_t requests,
                        std::size_t local_txs, SoakReport& report);

// request_id,action_id,source,destination,initiated_tick,terminal_tick,
// latency_ticks,outcome,detail,locked,consumed,refunded,burned
std::string request_metrics_csv(const World& world);

std::string conflicts_csv(const World& world);
std::string ledger_snapshot_csv(const World& world);
std::string end_state_digest(const World& world);

// Checks shared by every scenario: quiescent convergence, request/outcome
// bijection, and fee conservation against the genesis total.
void common_postconditions(ScenarioResult& result, const World& world);

}  // namespace crosslink::scenarios
