#include <doctest.h>

#include <fstream>
#include <sstream>

#include "crosslink/scenarios.hpp"

using namespace crosslink;
using namespace crosslink::scenarios;

namespace {

const ChainId kChainA = ChainId::from_u64(1);
const ChainId kChainB = ChainId::from_u64(2);

std::uint64_t nstar_oracle(FeeUnits capital, FeeUnits f_base, const std::vector<FeeUnits>& costs) {
    FeeUnits total = 0;
    std::uint64_t n = 0;
    while (true) {
        FeeUnits next = f_base + costs[n % costs.size()];
        if (total + next > capital) return n;
        total += next;
        ++n;
    }
}

}  // namespace

TEST_CASE("read pattern retrieves the remote stored value") {
    SUBCASE("default genesis: 42") {
        auto result = run_read(default_read_config(), default_read_spec(), 42);
        for (const auto& f : result.failures) MESSAGE(f);
        CHECK(result.passed);
        CHECK(result.summary.find("retrievedValue=42") != std::string::npos);
    }

    SUBCASE("value passthrough: a zero stored value reads back zero") {
        WorldConfig cfg = default_read_config();
        cfg.chains[0].contracts[0].storage[Word{}] = Word::from_u64(0);
        auto result = run_read(cfg, default_read_spec(), 42);
        CHECK(result.passed);
        CHECK(result.summary.find("retrievedValue=0") != std::string::npos);
    }

    SUBCASE("end state is invariant across 100 transport seeds") {
        WorldConfig cfg = default_read_config();
        cfg.transport = {1, 5, 0.0};
        std::set<std::string> digests;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            auto result = run_read(cfg, default_read_spec(), seed);
            CHECK(result.passed);
            digests.insert(result.trace_digest.hex());
        }
        // different seeds permute timing but never the outcome
        CHECK(digests.size() > 1);
    }
}

TEST_CASE("write pattern updates S_compact, S_main and the success flag") {
    SUBCASE("updateRemoteValue(99)") {
        auto result = run_write(default_write_config(), default_write_spec(), 42);
        for (const auto& f : result.failures) MESSAGE(f);
        CHECK(result.passed);
        CHECK(result.summary.find("storedValue=99") != std::string::npos);
        CHECK(result.summary.find("writeSuccessful=true") != std::string::npos);
    }

    SUBCASE("writing the current value still counts as a write") {
        World world(default_write_config(), 42);
        ExternalContract target{Address::from_hex("0xa2"), selector_of("setValue(uint256)"),
                                {Word::from_u64(0)}};
        Callback cb{kChainB, Address::from_hex("0xb2"), selector_of("handleWriteResult(bool)")};
        world.schedule_initiation(0, kChainB, Address::from_hex("0xb2"), kChainA, target, cb);
        world.run_until_quiescent();

        CHECK(world.chain(kChainB).storage_at(Address::from_hex("0xb2"), Word{}) ==
              bool_word(true));

        // the compact chain records the write entry even though the value is
        // unchanged
        bool write_recorded = false;
        for (const CompactBlock& b : world.compact(kChainA).blocks())
            if (b.origin == CompactOrigin::CrossChainExec)
                for (const CompactEntry& e : b.entries)
                    for (const auto& [ref, value] : e.writes)
                        write_recorded |= ref.contract == Address::from_hex("0xa2") &&
                                          value == Word::from_u64(0);
        CHECK(write_recorded);
    }

    SUBCASE("a read-only policy rejects the write and settles the fee as failed") {
        WorldConfig cfg = default_write_config();
        for (ExposureEntry& e : cfg.chains[0].exposure.entries) e.mode = ExposureMode::ReadOnly;

        World world(cfg, 42);
        ExternalContract target{Address::from_hex("0xa2"), selector_of("setValue(uint256)"),
                                {Word::from_u64(99)}};
        Callback cb{kChainB, Address::from_hex("0xb2"), selector_of("handleWriteResult(bool)")};
        world.schedule_initiation(0, kChainB, Address::from_hex("0xb2"), kChainA, target, cb);
        world.run_until_quiescent();

        REQUIRE(world.outcomes().size() == 1);
        const RequestOutcome& outcome = world.outcomes().begin()->second;
        CHECK(outcome.kind == RequestOutcome::Kind::Rejected);
        CHECK(outcome.detail == "WriteToReadOnly");
        CHECK(outcome.burned == 10);

        CHECK(world.chain(kChainA).storage_at(Address::from_hex("0xa2"), Word{}) == Word{});
        CHECK(world.chain(kChainB).storage_at(Address::from_hex("0xb2"), Word{}) == Word{});
        CHECK(World::snapshot_total(world.ledger().snapshot()) == world.genesis_fee_total());
    }
}

TEST_CASE("six-block path: untrusted compact validation delays the callback") {
    WorldConfig cfg = default_write_config();
    cfg.auth.trust_compact_validation = false;

    World world(cfg, 42);
    ExternalContract target{Address::from_hex("0xa2"), selector_of("setValue(uint256)"),
                            {Word::from_u64(99)}};
    Callback cb{kChainB, Address::from_hex("0xb2"), selector_of("handleWriteResult(bool)")};
    world.schedule_initiation(0, kChainB, Address::from_hex("0xb2"), kChainA, target, cb);
    world.run_until_quiescent();

    // the flow completes, but only after the destination minted six blocks
    CHECK(world.chain(kChainA).storage_at(Address::from_hex("0xa2"), Word{}) ==
          Word::from_u64(99));
    CHECK(world.chain(kChainB).storage_at(Address::from_hex("0xb2"), Word{}) == bool_word(true));

    REQUIRE(world.mempool(kChainA).entries().size() == 1);
    const XChainMempoolEntry& entry = world.mempool(kChainA).entries().begin()->second;
    CHECK(entry.status == EntryStatus::Finalized);
    CHECK(!entry.via_compact);
    CHECK(world.chain(kChainA).height() >= entry.inclusion_height + XChainMempool::kFinalityDepth);

    for (const SyncReport& r : world.verify_all_consistency()) CHECK(r.clean());
    CHECK(World::snapshot_total(world.ledger().snapshot()) == world.genesis_fee_total());
}

TEST_CASE("dos flood experiment") {
    SUBCASE("worked case: A=1000, f_base=10, c=5 admits 66 both ways") {
        DoSExperimentConfig dos;
        dos.attacker_capital = 1000;
        dos.per_invocation_costs = {5};
        DosReport report;
        auto result = run_dos(dos, 10, 1, /*with_pipeline=*/true, report);
        for (const auto& f : result.failures) MESSAGE(f);
        CHECK(result.passed);
        CHECK(report.accepted == 66);
        CHECK(report.pipeline_ran);
        CHECK(report.pipeline_accepted == 66);
        CHECK(report.total_cost_curve.back() == 990);
        CHECK(report.curve_csv.find("66,5,15,990") != std::string::npos);
    }

    SUBCASE("capital below the base fee admits nothing") {
        DoSExperimentConfig dos;
        dos.attacker_capital = 9;
        dos.per_invocation_costs = {0};
        DosReport report;
        auto result = run_dos(dos, 10, 1, false, report);
        CHECK(result.passed);
        CHECK(report.accepted == 0);
    }

    SUBCASE("variable cost schedules stop at the oracle's prefix sum") {
        DoSExperimentConfig dos;
        dos.attacker_capital = 1000;
        dos.per_invocation_costs = {5, 10, 15, 20};
        DosReport report;
        auto result = run_dos(dos, 10, 1, false, report);
        CHECK(result.passed);
        CHECK(report.accepted == nstar_oracle(1000, 10, dos.per_invocation_costs));
    }

    SUBCASE("capacity flag reflects Comp(n*) against Comp_max") {
        DoSExperimentConfig dos;
        dos.attacker_capital = 1000;
        dos.per_invocation_costs = {5};
        dos.comp_max = 1000;  // n* = 66, load 330 <= 1000
        DosReport report;
        run_dos(dos, 10, 1, false, report);
        CHECK(report.destination_load == 330);
        CHECK(!report.capacity_exceeded);

        DoSExperimentConfig tight = dos;
        tight.comp_max = 100;
        DosReport tight_report;
        run_dos(tight, 10, 1, false, tight_report);
        CHECK(tight_report.capacity_exceeded);
    }
}

TEST_CASE("the isolation watch trips on any S_main write outside a mirror") {
    World world(default_write_config(), 1);
    world.enable_isolation_watch();
    // a direct local write mutates S_main in a block with no SyncMirror
    world.schedule_local_tx(0, kChainA, Address::from_hex("0xe9"), Address::from_hex("0xa2"),
                            selector_of("setValue(uint256)"), {Word::from_u64(5)});
    CHECK_THROWS_AS(world.run_until_quiescent(), SimInvariantViolation);
}

TEST_CASE("isolation fuzz stays clean at small scale") {
    FuzzReport report;
    auto result = run_fuzz(600, 100, 2024, 1, report);
    for (const auto& f : result.failures) MESSAGE(f);
    CHECK(result.passed);
    CHECK(report.iterations == 600);
    CHECK(report.s_main_violations == 0);
    CHECK(report.unauthorized_accepted == 0);
    CHECK(report.outcome_mismatches == 0);
}

TEST_CASE("soak mixes traffic and still converges") {
    SoakReport report;
    auto result = run_soak(soak_config({1, 10, 0.1}), 5, 150, 30, report);
    for (const auto& f : result.failures) MESSAGE(f);
    CHECK(result.passed);
    CHECK(result.metrics.requests_emitted > 0);
}

TEST_CASE("golden trace: fixed config and seed reproduce bytes exactly") {
    auto result = run_read(default_read_config(), default_read_spec(), 42);
    REQUIRE(result.passed);

    std::ifstream golden(std::string(CROSSLINK_TEST_DATA_DIR) + "/read_pattern_seed42.trace",
                         std::ios::binary);
    REQUIRE_MESSAGE(golden.good(), "golden trace fixture missing");
    std::stringstream buffer;
    buffer << golden.rdbuf();
    CHECK(result.trace_text == buffer.str());
}

TEST_CASE("metrics reconcile with the trace") {
    SoakReport report;
    auto result = run_soak(soak_config({1, 4, 0.05}), 9, 60, 10, report);

    // every request row in the CSV has a terminal outcome column
    std::istringstream csv(result.metrics_csv);
    std::string line;
    std::getline(csv, line);  // header
    std::size_t rows = 0, pending = 0;
    while (std::getline(csv, line)) {
        ++rows;
        if (line.find(",pending,") != std::string::npos) ++pending;
    }
    CHECK(rows == result.metrics.requests_emitted);
    CHECK(pending == 0);
}
