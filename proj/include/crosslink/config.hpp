#pragma once

#include <string>

#include "crosslink/sim.hpp"

namespace crosslink {

// Genesis configuration, one JSON document with sections
// {chains, collateral, transport, auth, phantom_chains, scenario}.
WorldConfig parse_world_config(const std::string& json_text);
WorldConfig load_world_config(const std::string& path);

// Scenario actor bindings; every scenario reads its own subsection.
struct ReadScenarioSpec {
    ChainId provider_chain;
    Address provider;
    Word provider_slot;
    ChainId requester_chain;
    Address requester;
    Word result_slot;
};

struct WriteScenarioSpec {
    ChainId target_chain;
    Address target;
    Word target_slot;
    ChainId writer_chain;
    Address writer;
    Word flag_slot;
    std::uint64_t value = 99;
};

struct ScenarioSection {
    ReadScenarioSpec read;
    WriteScenarioSpec write;
    DoSExperimentConfig dos;
    std::size_t fuzz_iterations = 10'000;
    std::size_t fuzz_batch = 100;
    std::size_t soak_requests = 200;
    std::size_t soak_local_txs = 40;
};

ScenarioSection parse_scenario_section(const std::string& json_text);

}  // namespace crosslink
