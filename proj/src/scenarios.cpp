#include "crosslink/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <sstream>

namespace crosslink::scenarios {

namespace {

const char* kGetValueSig = "getValue()";
const char* kSetValueSig = "setValue(uint256)";
const char* kHandleResultSig = "handleResult(uint256)";
const char* kHandleWriteResultSig = "handleWriteResult(bool)";

ContractAccount value_contract(const Address& addr, std::uint64_t initial) {
    ContractAccount c;
    c.address = addr;
    FunctionShape get{selector_of(kGetValueSig), FunctionKind::ReadSlot, Word{}, kGetValueSig};
    FunctionShape set{selector_of(kSetValueSig), FunctionKind::WriteSlot, Word{}, kSetValueSig};
    c.functions.emplace(get.selector, get);
    c.functions.emplace(set.selector, set);
    c.storage[Word{}] = Word::from_u64(initial);
    return c;
}

ContractAccount handler_contract(const Address& addr, const char* signature) {
    ContractAccount c;
    c.address = addr;
    FunctionShape handle{selector_of(signature), FunctionKind::StoreParam, Word{}, signature};
    c.functions.emplace(handle.selector, handle);
    return c;
}

ExposureEntry expose(const Address& contract, const char* signature, ExposureMode mode) {
    ExposureEntry e;
    e.contract = contract;
    e.selector = selector_of(signature);
    e.storage_keys.insert(Word{});
    e.mode = mode;
    return e;
}

std::string outcome_name(RequestOutcome::Kind kind) {
    switch (kind) {
        case RequestOutcome::Kind::Executed: return "executed";
        case RequestOutcome::Kind::Rejected: return "rejected";
        case RequestOutcome::Kind::Dropped: return "dropped";
        case RequestOutcome::Kind::Unroutable: return "unroutable";
    }
    return "unknown";
}

}  // namespace

std::string conflicts_csv(const World& world) {
    std::string csv = "tick,chain,address,key,winner\n";
    for (const ConflictRecord& c : world.all_conflicts()) csv += c.csv_line() + "\n";
    return csv;
}

std::string ledger_snapshot_csv(const World& world) {
    LedgerSnapshot s = world.ledger().snapshot();
    std::string csv = "kind,owner,host_or_address,amount\n";
    for (const auto& [user, amount] : s.balances)
        csv += "balance," + user.chain.hex_tail(4) + ",0x" + user.address.hex() + "," +
               std::to_string(amount) + "\n";
    for (const auto& [pair, amount] : s.collateral)
        csv += "collateral," + pair.owner.hex_tail(4) + "," + pair.host.hex_tail(4) +
               "," + std::to_string(amount) + "\n";
    for (const auto& [request, amount] : s.locks)
        csv += "lock,-," + request.hex_prefix(8) + "," + std::to_string(amount) + "\n";
    csv += "sink,-,destination_gas," + std::to_string(s.destination_gas_consumed) + "\n";
    csv += "sink,-,base_fees_burned," + std::to_string(s.base_fees_burned) + "\n";
    return csv;
}

void common_postconditions(ScenarioResult& result, const World& world) {
    for (const SyncReport& report : world.verify_all_consistency())
        result.check(report.clean(), "consistency report lists " +
                                         std::to_string(report.mismatches.size()) + " mismatches");

    result.check(world.requests().size() == world.outcomes().size(),
                 "request/outcome bijection broken: " + std::to_string(world.requests().size()) +
                     " requests vs " + std::to_string(world.outcomes().size()) + " outcomes");
    for (const auto& [rid, info] : world.requests())
        result.check(world.outcomes().contains(rid),
                     "request 0x" + rid.hex_prefix(8) + " has no terminal outcome");

    FeeUnits total = World::snapshot_total(world.ledger().snapshot());
    result.check(total == world.genesis_fee_total(),
                 "fee conservation broken: genesis " + std::to_string(world.genesis_fee_total()) +
                     " vs final " + std::to_string(total));

    const WorldMetrics& m = world.metrics();
    result.check(m.admission_accepted + m.admission_refused == m.initiate_attempts,
                 "admission counts do not reconcile with attempts");

    std::size_t dropped_outcomes = 0;
    for (const auto& [rid, outcome] : world.outcomes())
        if (outcome.kind == RequestOutcome::Kind::Dropped) ++dropped_outcomes;
    result.check(dropped_outcomes == m.envelopes_dropped,
                 "drop accounting broken: " + std::to_string(m.envelopes_dropped) +
                     " dropped envelopes vs " + std::to_string(dropped_outcomes) +
                     " Dropped outcomes");
}

// one fingerprint over every chain's S_main and S_compact digest
std::string end_state_digest(const World& world) {
    Encoder e;
    for (const ChainId& id : world.chain_ids()) {
        e.fixed(id);
        e.fixed(world.chain(id).state_digest());
        e.fixed(world.compact(id).state_digest());
    }
    return e.digest().hex_prefix(8);
}

std::string request_metrics_csv(const World& world) {
    std::vector<std::pair<RequestId, const RequestInfo*>> rows;
    for (const auto& [rid, info] : world.requests()) rows.emplace_back(rid, &info);
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second->initiated != b.second->initiated)
            return a.second->initiated < b.second->initiated;
        return a.first < b.first;
    });

    std::string csv =
        "request_id,action_id,source,destination,initiated_tick,terminal_tick,latency_ticks,"
        "outcome,detail,locked,consumed,refunded,burned\n";
    for (const auto& [rid, info] : rows) {
        const auto& outcomes = world.outcomes();
        auto oit = outcomes.find(rid);
        std::string outcome = "pending";
        Tick terminal = 0;
        FeeUnits consumed = 0, refunded = 0, burned = 0;
        std::string detail;
        if (oit != outcomes.end()) {
            outcome = outcome_name(oit->second.kind);
            terminal = oit->second.terminal_tick;
            consumed = oit->second.consumed;
            refunded = oit->second.refunded;
            burned = oit->second.burned;
            detail = oit->second.detail;
        }
        csv += rid.hex_prefix(8) + ",";
        csv += (info->action_id == std::uint64_t(-1) ? "-" : std::to_string(info->action_id)) + ",";
        csv += info->source.hex_tail(4) + "," + info->destination.hex_tail(4) + ",";
        csv += std::to_string(info->initiated) + "," + std::to_string(terminal) + ",";
        csv += std::to_string(terminal >= info->initiated ? terminal - info->initiated : 0) + ",";
        csv += outcome + "," + detail + ",";
        csv += std::to_string(info->locked) + "," + std::to_string(consumed) + ",";
        csv += std::to_string(refunded) + "," + std::to_string(burned) + "\n";
    }
    return csv;
}

// ---- read pattern -----------------------------------------------------------

WorldConfig default_read_config() {
    WorldConfig cfg;

    ChainGenesis a;
    a.id = ChainId::from_u64(1);
    a.name = "chain-a";
    a.contracts.push_back(value_contract(Address::from_hex("0xa1"), 42));
    a.exposure.entries.push_back(
        expose(Address::from_hex("0xa1"), kGetValueSig, ExposureMode::ReadOnly));

    ChainGenesis b;
    b.id = ChainId::from_u64(2);
    b.name = "chain-b";
    b.contracts.push_back(handler_contract(Address::from_hex("0xb1"), kHandleResultSig));
    b.exposure.entries.push_back(
        expose(Address::from_hex("0xb1"), kHandleResultSig, ExposureMode::ReadWrite));
    b.balances[Address::from_hex("0xb1")] = 10'000;

    cfg.chains = {a, b};
    cfg.collateral = {{b.id, a.id, 10'000}, {a.id, b.id, 10'000}};
    cfg.transport = {1, 1, 0.0};
    return cfg;
}

ReadScenarioSpec default_read_spec() {
    ReadScenarioSpec spec;
    spec.provider_chain = ChainId::from_u64(1);
    spec.provider = Address::from_hex("0xa1");
    spec.provider_slot = Word{};
    spec.requester_chain = ChainId::from_u64(2);
    spec.requester = Address::from_hex("0xb1");
    spec.result_slot = Word{};
    return spec;
}

ScenarioResult run_read(const WorldConfig& cfg, const ReadScenarioSpec& spec, std::uint64_t seed) {
    World world(cfg, seed);
    ScenarioResult result;

    Word expected = world.chain(spec.provider_chain).storage_at(spec.provider, spec.provider_slot);

    ExternalContract target{spec.provider, selector_of(kGetValueSig), {}};
    Callback callback{spec.requester_chain, spec.requester, selector_of(kHandleResultSig)};
    world.schedule_initiation(0, spec.requester_chain, spec.requester, spec.provider_chain,
                              target, callback);
    world.run_until_quiescent();

    Word retrieved_main =
        world.chain(spec.requester_chain).storage_at(spec.requester, spec.result_slot);
    Word retrieved_compact =
        world.compact(spec.requester_chain).at({spec.requester, spec.result_slot});

    result.check(retrieved_main == expected, "retrievedValue in S_main is 0x" +
                                                 retrieved_main.hex_tail(8) + ", expected 0x" +
                                                 expected.hex_tail(8));
    result.check(retrieved_compact == expected, "retrievedValue in S_compact diverges");

    common_postconditions(result, world);

    result.metrics = world.metrics();
    result.trace_text = world.trace().text();
    result.trace_digest = world.trace().digest();
    result.metrics_csv = request_metrics_csv(world);
    result.conflicts_csv = conflicts_csv(world);
    result.ledger_csv = ledger_snapshot_csv(world);
    result.summary = "read-pattern: retrievedValue=" +
                     std::to_string(retrieved_main.to_u64()) +
                     " requests=" + std::to_string(world.requests().size()) +
                     " end_state=" + end_state_digest(world);
    return result;
}

// ---- write pattern ----------------------------------------------------------

WorldConfig default_write_config() {
    WorldConfig cfg;

    ChainGenesis a;
    a.id = ChainId::from_u64(1);
    a.name = "chain-a";
    a.contracts.push_back(value_contract(Address::from_hex("0xa2"), 0));
    a.exposure.entries.push_back(
        expose(Address::from_hex("0xa2"), kSetValueSig, ExposureMode::ReadWrite));
    a.exposure.entries.push_back(
        expose(Address::from_hex("0xa2"), kGetValueSig, ExposureMode::ReadOnly));

    ChainGenesis b;
    b.id = ChainId::from_u64(2);
    b.name = "chain-b";
    b.contracts.push_back(handler_contract(Address::from_hex("0xb2"), kHandleWriteResultSig));
    b.exposure.entries.push_back(
        expose(Address::from_hex("0xb2"), kHandleWriteResultSig, ExposureMode::ReadWrite));
    b.balances[Address::from_hex("0xb2")] = 10'000;

    cfg.chains = {a, b};
    cfg.collateral = {{b.id, a.id, 10'000}, {a.id, b.id, 10'000}};
    cfg.transport = {1, 1, 0.0};
    return cfg;
}

WriteScenarioSpec default_write_spec() {
    WriteScenarioSpec spec;
    spec.target_chain = ChainId::from_u64(1);
    spec.target = Address::from_hex("0xa2");
    spec.target_slot = Word{};
    spec.writer_chain = ChainId::from_u64(2);
    spec.writer = Address::from_hex("0xb2");
    spec.flag_slot = Word{};
    spec.value = 99;
    return spec;
}

ScenarioResult run_write(const WorldConfig& cfg, const WriteScenarioSpec& spec,
                         std::uint64_t seed) {
    World world(cfg, seed);
    ScenarioResult result;

    Word value = Word::from_u64(spec.value);
    ExternalContract target{spec.target, selector_of(kSetValueSig), {value}};
    Callback callback{spec.writer_chain, spec.writer, selector_of(kHandleWriteResultSig)};
    world.schedule_initiation(0, spec.writer_chain, spec.writer, spec.target_chain, target,
                              callback);
    world.run_until_quiescent();

    Word main_value = world.chain(spec.target_chain).storage_at(spec.target, spec.target_slot);
    Word compact_value = world.compact(spec.target_chain).at({spec.target, spec.target_slot});
    Word flag_main = world.chain(spec.writer_chain).storage_at(spec.writer, spec.flag_slot);

    result.check(compact_value == value, "S_compact storedValue is 0x" +
                                             compact_value.hex_tail(8) + ", expected 0x" +
                                             value.hex_tail(8));
    result.check(main_value == value, "S_main storedValue is 0x" + main_value.hex_tail(8) +
                                          ", expected 0x" + value.hex_tail(8));
    result.check(flag_main == bool_word(true), "writeSuccessful flag not set");

    common_postconditions(result, world);

    result.metrics = world.metrics();
    result.trace_text = world.trace().text();
    result.trace_digest = world.trace().digest();
    result.metrics_csv = request_metrics_csv(world);
    result.conflicts_csv = conflicts_csv(world);
    result.ledger_csv = ledger_snapshot_csv(world);
    result.summary = "write-pattern: storedValue=" + std::to_string(main_value.to_u64()) +
                     " writeSuccessful=" + (flag_main == bool_word(true) ? "true" : "false") +
                     " end_state=" + end_state_digest(world);
    return result;
}

// ---- DoS flood --------------------------------------------------------------

namespace {

// The flood model from the fee-bound analysis: sequential invocations, each
// locking fee_fn(c_i), stopping at the first refusal. No settlement happens
// inside the flood window.
void dos_admission_loop(const DoSExperimentConfig& dos, const FeeSchedule& schedule,
                        DosReport& report) {
    CollateralLedger ledger;
    UserRef attacker{ChainId::from_u64(0xB), Address::from_hex("0xee")};
    ledger.fund_user(attacker, dos.attacker_capital);

    FeeUnits total = 0;
    for (std::size_t i = 0;; ++i) {
        RequestId rid = RequestId::from_u64(i + 1);
        AdmissionResult res = ledger.admission_check(attacker, rid, dos.cost_at(i), schedule);
        if (!res.accepted) {
            report.refused = 1;
            break;
        }
        total += res.locked;
        report.total_cost_curve.push_back(total);
        report.destination_load += dos.cost_at(i);
        ++report.accepted;
        if (report.accepted > 50'000'000)
            throw SimInvariantViolation("DoS flood admission never refused");
    }
    report.capacity_exceeded = dos.comp_max != 0 && report.destination_load > dos.comp_max;

    std::string csv = "n,c_i,fee_locked,T_n\n";
    for (std::size_t i = 0; i < report.total_cost_curve.size(); ++i) {
        csv += std::to_string(i + 1) + "," + std::to_string(dos.cost_at(i)) + "," +
               std::to_string(schedule.fee_for(dos.cost_at(i))) + "," +
               std::to_string(report.total_cost_curve[i]) + "\n";
    }
    report.curve_csv = std::move(csv);
}

// Full-pipeline cross-check for constant-cost schedules: every attempt lands
// in one source block, so admissions are judged back to back with no refund
// in between, matching the flood model.
std::uint64_t dos_pipeline_flood(const DoSExperimentConfig& dos, FeeUnits f_base,
                                 std::uint64_t seed, std::string* trace_text,
                                 ScenarioResult& result) {
    FeeUnits c = dos.cost_at(0);

    WorldConfig cfg;
    ChainGenesis a;
    a.id = ChainId::from_u64(1);
    a.name = "dos-dest";
    a.fees = FeeSchedule{f_base, c, 0, 1, 1};
    a.contracts.push_back(value_contract(Address::from_hex("0xa1"), 7));
    a.exposure.entries.push_back(
        expose(Address::from_hex("0xa1"), kGetValueSig, ExposureMode::ReadOnly));

    ChainGenesis b;
    b.id = ChainId::from_u64(2);
    b.name = "dos-src";
    b.fees = FeeSchedule{f_base, c, 0, 1, 1};
    b.balances[Address::from_hex("0xee")] = dos.attacker_capital;

    cfg.chains = {a, b};
    cfg.collateral = {{b.id, a.id, dos.attacker_capital * 2 + 1000},
                      {a.id, b.id, dos.attacker_capital * 2 + 1000}};
    cfg.transport = {1, 1, 0.0};

    World world(cfg, seed);
    std::uint64_t attempts = dos.attacker_capital / f_base + 2;
    ExternalContract target{Address::from_hex("0xa1"), selector_of(kGetValueSig), {}};
    for (std::uint64_t i = 0; i < attempts; ++i)
        world.schedule_initiation(0, b.id, Address::from_hex("0xee"), a.id, target, Callback{});
    world.run_until_quiescent();

    common_postconditions(result, world);
    if (trace_text) *trace_text = world.trace().text();
    return world.metrics().admission_accepted;
}

}  // namespace

ScenarioResult run_dos(const DoSExperimentConfig& dos, FeeUnits f_base, std::uint64_t seed,
                       bool with_pipeline, DosReport& report) {
    ScenarioResult result;
    if (dos.per_invocation_costs.empty()) {
        result.check(false, "DoS experiment needs at least one per-invocation cost");
        return result;
    }

    FeeSchedule schedule;
    schedule.f_base = f_base;
    dos_admission_loop(dos, schedule, report);

    // prefix-sum bound, computed directly from the schedule
    FeeUnits total = 0;
    while (true) {
        FeeUnits next = f_base + dos.cost_at(report.n_star);
        if (total + next > dos.attacker_capital) break;
        total += next;
        ++report.n_star;
    }
    result.check(report.accepted == report.n_star,
                 "admission count " + std::to_string(report.accepted) +
                     " diverges from n* = " + std::to_string(report.n_star));

    result.check(report.total_cost_curve.empty() ||
                     report.total_cost_curve.back() <= dos.attacker_capital,
                 "T(n*) exceeds attacker capital");

    bool constant_cost = true;
    for (std::size_t i = 1; i < dos.per_invocation_costs.size(); ++i)
        constant_cost = constant_cost && dos.per_invocation_costs[i] == dos.per_invocation_costs[0];

    if (with_pipeline && constant_cost) {
        report.pipeline_ran = true;
        report.pipeline_accepted =
            dos_pipeline_flood(dos, f_base, seed, &result.trace_text, result);
        result.trace_digest = keccak256(result.trace_text);
        result.check(report.pipeline_accepted == report.accepted,
                     "pipeline flood accepted " + std::to_string(report.pipeline_accepted) +
                         " but the admission loop accepted " + std::to_string(report.accepted));
    }

    result.metrics_csv = report.curve_csv;
    result.summary = "dos-flood: A=" + std::to_string(dos.attacker_capital) +
                     " f_base=" + std::to_string(f_base) +
                     " n_star=" + std::to_string(report.n_star) +
                     " accepted=" + std::to_string(report.accepted) +
                     (report.pipeline_ran
                          ? " pipeline_accepted=" + std::to_string(report.pipeline_accepted)
                          : "") +
                     " load=" + std::to_string(report.destination_load) +
                     (dos.comp_max ? (report.capacity_exceeded ? " capacity=EXCEEDED"
                                                               : " capacity=within Comp_max")
                                   : "");
    return result;
}

// ---- isolation fuzz ---------------------------------------------------------

namespace {

struct FuzzRefs {
    std::vector<ChainId> chains;
    ChainId phantom;
    ChainId bogus;
    Address open;          // exposed read/write
    Address window;        // exposed read-only (writes refused)
    Address vault;         // registered, never exposed
    Address sink;          // exposed callback receiver
    Address unregistered;
    Address eoa;
};

FuzzRefs fuzz_refs() {
    FuzzRefs r;
    r.chains = {ChainId::from_u64(1), ChainId::from_u64(2), ChainId::from_u64(3)};
    r.phantom = ChainId::from_u64(0x7f);
    r.bogus = ChainId::from_u64(0x6e);
    r.open = Address::from_hex("0xc1");
    r.window = Address::from_hex("0xc2");
    r.vault = Address::from_hex("0xc3");
    r.sink = Address::from_hex("0xc4");
    r.unregistered = Address::from_hex("0xdd");
    r.eoa = Address::from_hex("0xe0");
    return r;
}

struct FuzzAction {
    Tick at = 0;
    ChainId source;
    ChainId dest;
    ExternalContract target;
    Callback callback;
    enum class Expected : std::uint8_t { Accept, Reject, Unroutable } expected = Expected::Accept;
    std::string label;
};

WorldConfig build_fuzz_config() {
    FuzzRefs refs = fuzz_refs();
    WorldConfig cfg;

    const char* names[] = {"alpha", "beta", "gamma"};
    for (std::size_t i = 0; i < refs.chains.size(); ++i) {
        ChainGenesis g;
        g.id = refs.chains[i];
        g.name = names[i];

        ContractAccount open = value_contract(refs.open, 0x11);
        ContractAccount window = value_contract(refs.window, 0x22);
        ContractAccount vault = value_contract(refs.vault, 0x33);
        ContractAccount sink = handler_contract(refs.sink, kHandleResultSig);
        g.contracts = {open, window, vault, sink};

        g.exposure.entries.push_back(expose(refs.open, kSetValueSig, ExposureMode::ReadWrite));
        g.exposure.entries.push_back(expose(refs.open, kGetValueSig, ExposureMode::ReadOnly));
        g.exposure.entries.push_back(expose(refs.window, kGetValueSig, ExposureMode::ReadOnly));
        g.exposure.entries.push_back(expose(refs.window, kSetValueSig, ExposureMode::ReadOnly));
        g.exposure.entries.push_back(expose(refs.sink, kHandleResultSig, ExposureMode::ReadWrite));

        g.balances[refs.eoa] = 1'000'000'000;
        cfg.chains.push_back(std::move(g));
    }

    for (const ChainId& owner : refs.chains)
        for (const ChainId& host : refs.chains)
            cfg.collateral.push_back({owner, host, 1'000'000'000});

    cfg.transport = {1, 5, 0.0};
    cfg.phantom_chains = {refs.phantom};
    return cfg;
}

std::vector<FuzzAction> generate_fuzz_actions(Rng& rng, const FuzzRefs& refs, std::size_t n) {
    std::vector<FuzzAction> actions;
    actions.reserve(n);
    Selector get = selector_of(kGetValueSig);
    Selector set = selector_of(kSetValueSig);
    Selector handle = selector_of(kHandleResultSig);
    Selector bogus_sel = selector_of("frobnicate()");

    for (std::size_t i = 0; i < n; ++i) {
        FuzzAction a;
        a.at = rng.below(200);
        a.source = refs.chains[rng.below(refs.chains.size())];

        bool phantom_dest = rng.below(10) == 0;
        a.dest = phantom_dest ? refs.phantom : refs.chains[rng.below(refs.chains.size())];

        Word value = Word::from_u64(rng.below(1'000'000) + 1);
        switch (rng.below(8)) {
            case 0:
                a.target = {refs.open, set, {value}};
                a.label = "open.set";
                a.expected = FuzzAction::Expected::Accept;
                break;
            case 1:
                a.target = {refs.open, get, {}};
                a.label = "open.get";
                a.expected = FuzzAction::Expected::Accept;
                break;
            case 2:
                a.target = {refs.window, get, {}};
                a.label = "window.get";
                a.expected = FuzzAction::Expected::Accept;
                break;
            case 3:
                a.target = {refs.window, set, {value}};
                a.label = "window.set(read-only)";
                a.expected = FuzzAction::Expected::Reject;
                break;
            case 4:
                a.target = {refs.vault, get, {}};
                a.label = "vault.get(unexposed)";
                a.expected = FuzzAction::Expected::Reject;
                break;
            case 5:
                a.target = {refs.unregistered, get, {}};
                a.label = "unregistered";
                a.expected = FuzzAction::Expected::Reject;
                break;
            case 6:
                a.target = {Address{}, get, {}};
                a.label = "zero-address";
                a.expected = FuzzAction::Expected::Reject;
                break;
            case 7:
                a.target = {refs.open, bogus_sel, {}};
                a.label = "bogus-selector";
                a.expected = FuzzAction::Expected::Reject;
                break;
        }
        if (phantom_dest) {
            a.expected = FuzzAction::Expected::Unroutable;
            a.label += "+phantom-dest";
        }

        switch (rng.below(6)) {
            case 0:
            case 1:
                a.callback = {a.source, refs.sink, handle};
                break;
            case 2:
                a.callback = Callback{};
                break;
            case 3:
                a.callback = {a.dest, refs.sink, handle};  // local callback on destination
                break;
            case 4:
                a.callback = {refs.chains[rng.below(refs.chains.size())], refs.vault, handle};
                break;  // callback target will fail; harmless
            case 5:
                a.callback = {rng.below(2) ? refs.bogus : refs.phantom, refs.sink, handle};
                break;  // unroutable or unknown callback chain
        }
        actions.push_back(std::move(a));
    }
    return actions;
}

struct FuzzBatchResult {
    std::size_t calls = 0;
    std::size_t violations = 0;
    std::size_t unauthorized_accepted = 0;
    std::size_t mismatches = 0;
    std::vector<std::string> failures;
    std::string repro;
};

struct PrefixRun {
    std::unique_ptr<World> world;
    bool violated = false;
    std::string violation;
};

PrefixRun fuzz_run_prefix(const WorldConfig& cfg, const std::vector<FuzzAction>& actions,
                          std::size_t prefix, std::uint64_t seed) {
    PrefixRun run;
    run.world = std::make_unique<World>(cfg, seed);
    run.world->enable_isolation_watch();
    FuzzRefs refs = fuzz_refs();
    for (std::size_t i = 0; i < prefix; ++i) {
        const FuzzAction& a = actions[i];
        run.world->schedule_initiation(a.at, a.source, refs.eoa, a.dest, a.target, a.callback);
    }
    try {
        run.world->run_until_quiescent();
    } catch (const SimInvariantViolation& e) {
        run.violated = true;
        run.violation = e.what();
    }
    return run;
}

FuzzBatchResult run_fuzz_batch(const WorldConfig& cfg, std::uint64_t batch_seed,
                               std::size_t calls, std::size_t batch_index) {
    FuzzBatchResult out;
    out.calls = calls;
    FuzzRefs refs = fuzz_refs();
    Rng gen(subseed(batch_seed, "fuzz-gen"));
    std::vector<FuzzAction> actions = generate_fuzz_actions(gen, refs, calls);

    PrefixRun full = fuzz_run_prefix(cfg, actions, actions.size(), batch_seed);
    if (full.violated) {
        std::string violation = full.violation;
        ++out.violations;
        // shrink to the smallest failing prefix; isolation failures are
        // caused by a single call, so the property is monotone in practice
        std::size_t lo = 1, hi = actions.size();
        while (lo < hi) {
            std::size_t mid = lo + (hi - lo) / 2;
            if (fuzz_run_prefix(cfg, actions, mid, batch_seed).violated)
                hi = mid;
            else
                lo = mid + 1;
        }
        std::ostringstream repro;
        repro << "isolation violation in batch " << batch_index << " (seed " << batch_seed
              << "): " << violation << "\nminimal failing prefix: " << lo << " call(s)\n";
        for (std::size_t i = 0; i < lo; ++i)
            repro << "  [" << i << "] tick=" << actions[i].at << " " << actions[i].label
                  << " src=0x" << actions[i].source.hex_tail(1) << " dst=0x"
                  << actions[i].dest.hex_tail(1) << "\n";
        out.repro = repro.str();
        out.failures.push_back("S_main isolation violated");
        return out;
    }

    World& world = *full.world;

    // outcome labels: every unauthorized call must have been rejected
    std::map<std::uint64_t, RequestOutcome::Kind> by_action;
    for (const auto& [rid, info] : world.requests()) {
        auto oit = world.outcomes().find(rid);
        if (oit != world.outcomes().end() && info.action_id != std::uint64_t(-1))
            by_action[info.action_id] = oit->second.kind;
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
        auto it = by_action.find(i);
        if (it == by_action.end()) {
            ++out.mismatches;
            out.failures.push_back("action " + std::to_string(i) + " (" + actions[i].label +
                                   ") produced no request");
            continue;
        }
        RequestOutcome::Kind got = it->second;
        bool executed = got == RequestOutcome::Kind::Executed;
        switch (actions[i].expected) {
            case FuzzAction::Expected::Accept:
                if (!executed) {
                    ++out.mismatches;
                    out.failures.push_back("authorized action " + std::to_string(i) + " (" +
                                           actions[i].label + ") ended " + outcome_name(got));
                }
                break;
            case FuzzAction::Expected::Reject:
                if (got != RequestOutcome::Kind::Rejected) {
                    ++out.mismatches;
                    if (executed) ++out.unauthorized_accepted;
                    out.failures.push_back("unauthorized action " + std::to_string(i) + " (" +
                                           actions[i].label + ") ended " + outcome_name(got));
                }
                break;
            case FuzzAction::Expected::Unroutable:
                if (got != RequestOutcome::Kind::Unroutable) {
                    ++out.mismatches;
                    if (executed) ++out.unauthorized_accepted;
                    out.failures.push_back("phantom-dest action " + std::to_string(i) +
                                           " ended " + outcome_name(got));
                }
                break;
        }
    }

    // the shared invariants hold for every batch world as well
    ScenarioResult post;
    common_postconditions(post, world);
    for (const std::string& f : post.failures) {
        ++out.mismatches;
        out.failures.push_back("batch " + std::to_string(batch_index) + ": " + f);
    }
    return out;
}

}  // namespace

ScenarioResult run_fuzz(std::size_t iterations, std::size_t batch, std::uint64_t seed, int jobs,
                        FuzzReport& report) {
    ScenarioResult result;
    if (batch == 0) batch = 100;
    WorldConfig cfg = build_fuzz_config();

    std::size_t batches = (iterations + batch - 1) / batch;
    std::vector<FuzzBatchResult> results(batches);

    auto worker = [&](std::size_t b) {
        std::size_t calls = std::min(batch, iterations - b * batch);
        std::uint64_t batch_seed = subseed(seed, "fuzz-batch-" + std::to_string(b));
        return run_fuzz_batch(cfg, batch_seed, calls, b);
    };

    if (jobs <= 1) {
        for (std::size_t b = 0; b < batches; ++b) results[b] = worker(b);
    } else {
        std::vector<std::future<FuzzBatchResult>> futures;
        futures.reserve(batches);
        for (std::size_t b = 0; b < batches; ++b)
            futures.push_back(std::async(std::launch::async, worker, b));
        for (std::size_t b = 0; b < batches; ++b) results[b] = futures[b].get();
    }

    for (const FuzzBatchResult& r : results) {
        report.iterations += r.calls;
        report.s_main_violations += r.violations;
        report.unauthorized_accepted += r.unauthorized_accepted;
        report.outcome_mismatches += r.mismatches;
        if (report.repro.empty() && !r.repro.empty()) report.repro = r.repro;
        for (const std::string& f : r.failures) result.check(false, f);
    }

    result.summary = "isolation-fuzz: iterations=" + std::to_string(report.iterations) +
                     " violations=" + std::to_string(report.s_main_violations) +
                     " unauthorized_accepted=" + std::to_string(report.unauthorized_accepted) +
                     " mismatches=" + std::to_string(report.outcome_mismatches);
    return result;
}

// ---- soak -------------------------------------------------------------------

WorldConfig soak_config(TransportConfig transport) {
    WorldConfig cfg = build_fuzz_config();
    cfg.transport = transport;
    return cfg;
}

ScenarioResult run_soak(const WorldConfig& cfg, std::uint64_t seed, std::size_t requests,
                        std::size_t local_txs, SoakReport& report) {
    ScenarioResult result;
    FuzzRefs refs = fuzz_refs();
    Rng gen(subseed(seed, "soak-gen"));
    World world(cfg, seed);

    Selector get = selector_of(kGetValueSig);
    Selector set = selector_of(kSetValueSig);
    Selector handle = selector_of(kHandleResultSig);

    auto started = std::chrono::steady_clock::now();

    for (std::size_t i = 0; i < requests; ++i) {
        Tick at = gen.below(400);
        ChainId source = refs.chains[gen.below(refs.chains.size())];
        ChainId dest = refs.chains[gen.below(refs.chains.size())];
        bool write = gen.below(2) == 0;
        ExternalContract target{refs.open, write ? set : get,
                                write ? std::vector<Word>{Word::from_u64(gen.below(1000) + 1)}
                                      : std::vector<Word>{}};
        Callback callback =
            gen.below(3) == 0 ? Callback{} : Callback{source, refs.sink, handle};
        world.schedule_initiation(at, source, refs.eoa, dest, target, callback);
    }

    for (std::size_t i = 0; i < local_txs; ++i) {
        Tick at = gen.below(400);
        ChainId chain = refs.chains[gen.below(refs.chains.size())];
        world.schedule_local_tx(at, chain, refs.eoa, refs.open, set,
                                {Word::from_u64(gen.below(1000) + 1)});
    }

    world.run_until_quiescent();
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    report.requests = requests;
    report.local_txs = local_txs;
    report.conflicts = world.all_conflicts().size();

    common_postconditions(result, world);

    result.metrics = world.metrics();
    result.trace_text = world.trace().text();
    result.trace_digest = world.trace().digest();
    result.metrics_csv = request_metrics_csv(world);
    result.conflicts_csv = conflicts_csv(world);
    result.ledger_csv = ledger_snapshot_csv(world);

    std::ostringstream summary;
    summary << "soak: requests=" << requests << " local_txs=" << local_txs
            << " events=" << world.metrics().events_executed
            << " dropped=" << world.metrics().envelopes_dropped << " conflicts=" << report.conflicts
            << " end_state=" << end_state_digest(world) << " wall=" << report.wall_seconds << "s";
    result.summary = summary.str();
    return result;
}

}  // namespace crosslink::scenarios
