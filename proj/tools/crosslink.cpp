#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "crosslink/config.hpp"
#include "crosslink/scenarios.hpp"

namespace {

using namespace crosslink;

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 42;
    std::string trace_path;
    std::string metrics_path;
    std::string conflicts_path;
    std::string ledger_path;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "genesis/config JSON file");
    cmd->add_option("--seed", opts.seed, "master seed; one number reproduces the whole run");
    cmd->add_option("--trace", opts.trace_path, "write the canonical event trace to this file");
    cmd->add_option("--metrics", opts.metrics_path, "write per-request metrics CSV to this file");
    cmd->add_option("--conflicts", opts.conflicts_path, "write the synchronizer conflict log CSV");
    cmd->add_option("--ledger", opts.ledger_path, "write the closing ledger snapshot CSV");
    cmd->add_flag("--quiet", opts.quiet, "suppress the summary line");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

int finish(const scenarios::ScenarioResult& result, const CommonOpts& opts) {
    if (!opts.trace_path.empty()) write_file(opts.trace_path, result.trace_text);
    if (!opts.metrics_path.empty()) write_file(opts.metrics_path, result.metrics_csv);
    if (!opts.conflicts_path.empty()) write_file(opts.conflicts_path, result.conflicts_csv);
    if (!opts.ledger_path.empty()) write_file(opts.ledger_path, result.ledger_csv);
    if (!opts.quiet) {
        std::cout << result.summary << "\n";
        for (const std::string& failure : result.failures)
            std::cout << "FAIL: " << failure << "\n";
        std::cout << (result.passed ? "PASS" : "FAIL") << "\n";
    }
    return result.passed ? 0 : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"crosslink: deterministic multi-chain cross-chain execution simulator"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* read_cmd = app.add_subcommand("read-pattern", "cross-chain data retrieval round trip");
    add_common(read_cmd, opts);

    auto* write_cmd = app.add_subcommand("write-pattern", "cross-chain state update round trip");
    add_common(write_cmd, opts);
    std::uint64_t write_value = 99;
    write_cmd->add_option("--value", write_value, "value to write on the remote chain");

    auto* dos_cmd = app.add_subcommand("dos-flood", "invocation-flood admission experiment");
    add_common(dos_cmd, opts);
    FeeUnits capital = 1000, f_base = 10, comp_max = 0;
    std::vector<FeeUnits> costs;
    dos_cmd->add_option("--capital", capital, "attacker capital A");
    dos_cmd->add_option("--f-base", f_base, "base fee locked per invocation");
    dos_cmd->add_option("--cost", costs, "per-invocation cost schedule c_i (repeatable)");
    dos_cmd->add_option("--comp-max", comp_max, "destination capacity per window");

    auto* fuzz_cmd = app.add_subcommand("isolation-fuzz", "randomized S_main isolation fuzz");
    add_common(fuzz_cmd, opts);
    std::size_t iterations = 10'000, batch = 100;
    int jobs = 1;
    fuzz_cmd->add_option("--iterations", iterations, "total random cross-chain calls");
    fuzz_cmd->add_option("--batch", batch, "calls per independent simulation instance");
    fuzz_cmd->add_option("--jobs", jobs, "worker threads for independent batches");

    auto* soak_cmd = app.add_subcommand("soak", "mixed traffic under latency and drops");
    add_common(soak_cmd, opts);
    std::size_t requests = 200, local_txs = 40;
    soak_cmd->add_option("--requests", requests, "cross-chain requests to schedule");
    soak_cmd->add_option("--local-txs", local_txs, "direct main-chain transactions to mix in");

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<ScenarioSection> section;
        if (!opts.config_path.empty())
            section = parse_scenario_section(read_file(opts.config_path));

        if (read_cmd->parsed()) {
            WorldConfig cfg = opts.config_path.empty() ? scenarios::default_read_config()
                                                       : load_world_config(opts.config_path);
            ReadScenarioSpec spec = section && !section->read.provider_chain.is_zero()
                                        ? section->read
                                        : scenarios::default_read_spec();
            return finish(scenarios::run_read(cfg, spec, opts.seed), opts);
        }

        if (write_cmd->parsed()) {
            WorldConfig cfg = opts.config_path.empty() ? scenarios::default_write_config()
                                                       : load_world_config(opts.config_path);
            WriteScenarioSpec spec = section && !section->write.target_chain.is_zero()
                                         ? section->write
                                         : scenarios::default_write_spec();
            if (write_cmd->count("--value")) spec.value = write_value;
            return finish(scenarios::run_write(cfg, spec, opts.seed), opts);
        }

        if (dos_cmd->parsed()) {
            DoSExperimentConfig dos;
            dos.attacker_capital = capital;
            dos.per_invocation_costs = costs.empty() ? std::vector<FeeUnits>{5} : costs;
            dos.comp_max = comp_max;
            if (section && section->dos.attacker_capital && !dos_cmd->count("--capital"))
                dos = section->dos;
            scenarios::DosReport report;
            auto result = scenarios::run_dos(dos, f_base, opts.seed, /*with_pipeline=*/true, report);
            return finish(result, opts);
        }

        if (fuzz_cmd->parsed()) {
            scenarios::FuzzReport report;
            auto result = scenarios::run_fuzz(iterations, batch, opts.seed, jobs, report);
            if (!report.repro.empty()) std::cerr << report.repro;
            return finish(result, opts);
        }

        if (soak_cmd->parsed()) {
            WorldConfig cfg = opts.config_path.empty()
                                  ? scenarios::soak_config({1, 10, 0.1})
                                  : load_world_config(opts.config_path);
            scenarios::SoakReport report;
            return finish(scenarios::run_soak(cfg, opts.seed, requests, local_txs, report), opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
