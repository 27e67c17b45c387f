#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crosslink/auth.hpp"
#include "crosslink/chain.hpp"
#include "crosslink/compact.hpp"
#include "crosslink/messages.hpp"
#include "crosslink/netsim.hpp"
#include "crosslink/router.hpp"
#include "crosslink/sync.hpp"

namespace crosslink {

struct ChainGenesis {
    ChainId id;
    std::string name;
    Tick block_interval = 1;
    FeeSchedule fees;
    std::vector<ContractAccount> contracts;
    ExposurePolicy exposure;
    std::map<Address, FeeUnits> balances;
};

struct CollateralGenesis {
    ChainId owner;
    ChainId host;
    FeeUnits amount = 0;
};

struct AuthConfig {
    // "validated on the compact chain" means committed in a compact block;
    // when an operator does not trust that validation, entries fall back to
    // the six-block depth rule.
    bool trust_compact_validation = true;
};

struct WorldConfig {
    std::vector<ChainGenesis> chains;
    std::vector<CollateralGenesis> collateral;
    TransportConfig transport;
    AuthConfig auth;
    // Chains routers accept as targets but the locator cannot resolve;
    // requests toward them settle Failed at forwarding time.
    std::vector<ChainId> phantom_chains;
};

struct RequestInfo {
    ChainId source;
    ChainId destination;
    Address sender;
    Tick initiated = 0;
    bool fee_exempt = false;
    std::uint64_t action_id = std::uint64_t(-1);
    FeeUnits locked = 0;
};

struct RequestOutcome {
    enum class Kind : std::uint8_t {
        Executed,         // destination execution committed (callback, if any, tracked separately)
        Rejected,         // refused by policy, router guard, or execution failure
        Dropped,          // envelope lost in transport
        Unroutable,       // locator could not resolve the destination
    } kind = Kind::Rejected;
    Tick terminal_tick = 0;
    std::string detail;
    FeeUnits consumed = 0;
    FeeUnits refunded = 0;
    FeeUnits burned = 0;
};

struct WorldMetrics {
    std::uint64_t actions = 0;
    std::uint64_t initiate_attempts = 0;
    std::uint64_t admission_accepted = 0;
    std::uint64_t admission_refused = 0;
    std::uint64_t requests_emitted = 0;
    std::uint64_t envelopes_delivered = 0;
    std::uint64_t envelopes_dropped = 0;
    std::uint64_t executions_ok = 0;
    std::uint64_t executions_rejected = 0;
    std::uint64_t callbacks_local = 0;
    std::uint64_t callbacks_forwarded = 0;
    std::uint64_t mirror_txs = 0;
    std::uint64_t events_executed = 0;
};

// Newline-delimited, stable field order: tick,kind,chain,request,digest.
class TraceWriter {
public:
    void line(Tick tick, std::string_view kind, std::string_view chain, std::string_view request,
              std::string_view digest);
    const std::string& text() const { return text_; }
    Digest digest() const { return keccak256(text_); }
    std::size_t lines() const { return lines_; }

private:
    std::string text_;
    std::size_t lines_ = 0;
};

// One deterministic multi-chain simulation instance, driven to quiescence by
// the event loop. Pipeline per delivered cross-chain call, in order:
// auth layer (mempool + fees) -> compact chain execution -> router callback
// routing, with the synchronizer mirroring compact writes back to S_main.
class World {
public:
    World(WorldConfig config, std::uint64_t seed);

    // ---- scenario surface ----
    std::uint64_t schedule_initiation(Tick at, const ChainId& source, const Address& sender,
                                      const ChainId& target_chain, ExternalContract target,
                                      Callback callback);
    std::uint64_t schedule_local_tx(Tick at, const ChainId& chain, const Address& sender,
                                    const Address& target, const Selector& selector,
                                    std::vector<Word> params);

    void run_until_quiescent(std::size_t max_events = 5'000'000);

    // ---- inspection ----
    std::vector<ChainId> chain_ids() const;
    const ChainState& chain(const ChainId& id) const;
    const CompactChain& compact(const ChainId& id) const;
    const ExposurePolicy& policy(const ChainId& id) const;
    const CollateralLedger& ledger() const { return ledger_; }
    const XChainMempool& mempool(const ChainId& id) const;
    const Synchronizer& synchronizer(const ChainId& id) const;

    std::vector<SyncReport> verify_all_consistency() const;
    std::vector<ConflictRecord> all_conflicts() const;

    const std::map<RequestId, RequestInfo>& requests() const { return requests_; }
    const std::map<RequestId, RequestOutcome>& outcomes() const { return outcomes_; }
    const WorldMetrics& metrics() const { return metrics_; }
    const TraceWriter& trace() const { return trace_; }
    Tick now() const { return now_; }

    FeeUnits genesis_fee_total() const { return genesis_fee_total_; }

    // When enabled, any S_main digest change outside a block that applies a
    // SyncMirror transaction throws SimInvariantViolation.
    void enable_isolation_watch() { isolation_watch_ = true; }

    static FeeUnits snapshot_total(const LedgerSnapshot& s);

private:
    struct Parked {
        CrossChainCall call;
        Router::IncomingOutcome outcome;
    };

    struct PerChain {
        PerChain(const ChainGenesis& g)
            : genesis(g), chain(g.id, g.fees), compact(g.id), router(g.id), sync(g.id) {}

        ChainGenesis genesis;
        ChainState chain;
        CompactChain compact;
        Router router;
        Synchronizer sync;
        XChainMempool mempool;

        std::vector<Transaction> pending_local;
        std::vector<Transaction> pending_mirrors;
        std::map<Address, std::uint64_t> assign_nonce;
        bool block_scheduled = false;
        std::vector<Parked> parked;
        // requests emitted while the current block executes, with action tags
        std::vector<std::pair<CrossChainRequestEvent, std::uint64_t>> block_events;
    };

    struct PendingAction {
        enum class Kind : std::uint8_t { Initiate, LocalTx } kind = Kind::Initiate;
        ChainId chain;
        Transaction tx;
    };

    class InitiateInterceptor;  // adapter wiring mine_block into the router

    PerChain& per(const ChainId& id);
    const PerChain& per(const ChainId& id) const;

    void schedule_block(PerChain& pc, Tick not_before);
    void enqueue_tx(PerChain& pc, Transaction tx, Tick now);

    void on_event(const SimEvent& ev);
    void on_block(PerChain& pc, Tick tick);
    void on_delivery(const Envelope& env, Tick tick);
    void on_action(std::uint64_t action_id, Tick tick);

    std::optional<CallResult> intercept_tx(PerChain& pc, const Transaction& tx, Tick now);
    void forward_request(PerChain& source, const CrossChainRequestEvent& ev, Tick tick,
                         bool fee_exempt, std::uint64_t action_id);
    void complete_finalized(PerChain& dest, const CrossChainCall& call,
                            Router::IncomingOutcome& outcome, Tick tick);
    void release_finalized(PerChain& pc, Tick tick);

    RequestOutcome settle(const RequestId& request, SettleOutcome::Kind kind, FeeUnits actual_cost,
                          Tick tick);
    void record_outcome(const RequestId& request, RequestOutcome outcome);

    FeeUnits estimate_destination_cost(const ChainId& target_chain,
                                       const ExternalContract& target) const;

    void isolation_check(const SimEvent& ev, bool mirror_applied, const ChainId* block_chain);

    WorldConfig config_;
    std::map<ChainId, std::unique_ptr<PerChain>> chains_;
    CollateralLedger ledger_;
    EnodeRegistry enodes_;
    EventQueue queue_;
    Rng transport_rng_;
    TraceWriter trace_;
    WorldMetrics metrics_;

    std::vector<PendingAction> actions_;
    std::map<RequestId, RequestInfo> requests_;
    std::map<RequestId, RequestOutcome> outcomes_;
    // (chain, sender, nonce) of enqueued initiation -> action id
    std::map<std::tuple<ChainId, Address, std::uint64_t>, std::uint64_t> action_tags_;

    Tick now_ = 0;
    FeeUnits genesis_fee_total_ = 0;
    bool isolation_watch_ = false;
    std::map<ChainId, Digest> last_main_digest_;
};

}  // namespace crosslink
