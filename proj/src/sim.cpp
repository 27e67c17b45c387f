#include "crosslink/sim.hpp"

#include <algorithm>

namespace crosslink {

namespace {

const Selector kInitiateSelector = selector_of("initiateCrossChainCall()");

std::string chain_tag(const ChainId& id) { return id.hex_tail(4); }

std::string request_tag(const RequestId& id) { return id.hex_prefix(8); }

std::string digest_tag(const Digest& d) { return d.hex_prefix(8); }

std::vector<std::uint8_t> encode_initiate_params(const ChainId& target_chain,
                                                 const ExternalContract& target,
                                                 const Callback& callback) {
    Encoder e;
    e.fixed(target_chain);
    e.fixed(target.contract_address).fixed(target.function_selector).words(target.params);
    e.fixed(callback.chain).fixed(callback.callback_address).fixed(callback.callback_selector);
    return e.bytes();
}

// Initiate parameters travel through the transaction's word list; pack the
// byte stream into words (length in the first word).
std::vector<Word> bytes_to_words(const std::vector<std::uint8_t>& data) {
    std::vector<Word> out;
    Word len = Word::from_u64(data.size());
    out.push_back(len);
    for (std::size_t off = 0; off < data.size(); off += 32) {
        Word w{};
        std::size_t n = std::min<std::size_t>(32, data.size() - off);
        std::copy(data.begin() + off, data.begin() + off + n, w.bytes.begin());
        out.push_back(w);
    }
    return out;
}

std::vector<std::uint8_t> words_to_bytes(std::span<const Word> words) {
    if (words.empty()) throw std::runtime_error("missing length word");
    std::uint64_t len = words[0].to_u64();
    if (words.size() < 1 + (len + 31) / 32) throw std::runtime_error("truncated word payload");
    std::vector<std::uint8_t> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i)
        out.push_back(words[1 + i / 32].bytes[i % 32]);
    return out;
}

}  // namespace

void TraceWriter::line(Tick tick, std::string_view kind, std::string_view chain,
                       std::string_view request, std::string_view digest) {
    text_ += std::to_string(tick);
    text_ += ',';
    text_ += kind;
    text_ += ',';
    text_ += chain;
    text_ += ',';
    text_ += request;
    text_ += ',';
    text_ += digest;
    text_ += '\n';
    ++lines_;
}

class World::InitiateInterceptor : public TxInterceptor {
public:
    InitiateInterceptor(World& world, PerChain& pc) : world_(world), pc_(pc) {}
    std::optional<CallResult> intercept(const Transaction& tx, Tick now) override {
        return world_.intercept_tx(pc_, tx, now);
    }

private:
    World& world_;
    PerChain& pc_;
};

World::World(WorldConfig config, std::uint64_t seed)
    : config_(std::move(config)), transport_rng_(subseed(seed, "transport")) {
    if (config_.chains.empty()) throw ConfigError("no chains configured");

    for (const ChainGenesis& g : config_.chains) {
        if (g.id.is_zero()) throw ConfigError("chain id must be nonzero");
        if (chains_.contains(g.id)) throw ConfigError("duplicate chain id 0x" + g.id.hex());
        auto pc = std::make_unique<PerChain>(g);
        for (const ContractAccount& c : g.contracts) pc->chain.register_contract(c);
        pc->compact.authorize(g.exposure, pc->chain);
        chains_.emplace(g.id, std::move(pc));
    }

    for (auto& [id, pc] : chains_) {
        enodes_.register_enode({id, "enode://" + pc->genesis.name, true});
        for (auto& [other_id, other] : chains_) pc->router.register_chain(other_id);
        for (const ChainId& phantom : config_.phantom_chains) pc->router.register_chain(phantom);
        for (const auto& [addr, amount] : pc->genesis.balances)
            ledger_.fund_user({id, addr}, amount);
        last_main_digest_[id] = pc->chain.state_digest();
    }

    for (const CollateralGenesis& cg : config_.collateral)
        ledger_.fund_collateral({cg.owner, cg.host}, cg.amount);

    genesis_fee_total_ = snapshot_total(ledger_.snapshot());
}

FeeUnits World::snapshot_total(const LedgerSnapshot& s) {
    FeeUnits total = 0;
    for (const auto& [user, amount] : s.balances) total += amount;
    for (const auto& [pair, amount] : s.collateral) total += amount;
    for (const auto& [request, amount] : s.locks) total += amount;
    total += s.destination_gas_consumed;
    total += s.base_fees_burned;
    return total;
}

World::PerChain& World::per(const ChainId& id) {
    auto it = chains_.find(id);
    if (it == chains_.end()) throw UnknownChain("chain 0x" + id.hex_tail(4) + " not in world");
    return *it->second;
}

const World::PerChain& World::per(const ChainId& id) const {
    auto it = chains_.find(id);
    if (it == chains_.end()) throw UnknownChain("chain 0x" + id.hex_tail(4) + " not in world");
    return *it->second;
}

std::vector<ChainId> World::chain_ids() const {
    std::vector<ChainId> out;
    for (const auto& [id, pc] : chains_) out.push_back(id);
    return out;
}

const ChainState& World::chain(const ChainId& id) const { return per(id).chain; }
const CompactChain& World::compact(const ChainId& id) const { return per(id).compact; }
const ExposurePolicy& World::policy(const ChainId& id) const { return per(id).genesis.exposure; }
const XChainMempool& World::mempool(const ChainId& id) const { return per(id).mempool; }
const Synchronizer& World::synchronizer(const ChainId& id) const { return per(id).sync; }

std::vector<SyncReport> World::verify_all_consistency() const {
    std::vector<SyncReport> out;
    for (const auto& [id, pc] : chains_)
        out.push_back(Synchronizer::verify_consistency(pc->chain, pc->compact, pc->genesis.exposure));
    return out;
}

std::vector<ConflictRecord> World::all_conflicts() const {
    std::vector<ConflictRecord> out;
    for (const auto& [id, pc] : chains_) {
        const auto& c = pc->sync.conflicts();
        out.insert(out.end(), c.begin(), c.end());
    }
    return out;
}

std::uint64_t World::schedule_initiation(Tick at, const ChainId& source, const Address& sender,
                                         const ChainId& target_chain, ExternalContract target,
                                         Callback callback) {
    per(source);  // validate early

    PendingAction action;
    action.kind = PendingAction::Kind::Initiate;
    action.chain = source;
    action.tx.sender = sender;
    action.tx.target = router_address();
    action.tx.selector = kInitiateSelector;
    action.tx.params = bytes_to_words(encode_initiate_params(target_chain, target, callback));
    action.tx.kind = TxKind::Local;

    std::uint64_t id = actions_.size();
    actions_.push_back(std::move(action));
    queue_.push(at, ScenarioActionEvent{id});
    ++metrics_.actions;
    return id;
}

std::uint64_t World::schedule_local_tx(Tick at, const ChainId& chain, const Address& sender,
                                       const Address& target, const Selector& selector,
                                       std::vector<Word> params) {
    per(chain);

    PendingAction action;
    action.kind = PendingAction::Kind::LocalTx;
    action.chain = chain;
    action.tx.sender = sender;
    action.tx.target = target;
    action.tx.selector = selector;
    action.tx.params = std::move(params);
    action.tx.kind = TxKind::Local;

    std::uint64_t id = actions_.size();
    actions_.push_back(std::move(action));
    queue_.push(at, ScenarioActionEvent{id});
    ++metrics_.actions;
    return id;
}

void World::schedule_block(PerChain& pc, Tick not_before) {
    if (pc.block_scheduled) return;
    pc.block_scheduled = true;
    queue_.push(not_before, BlockProductionEvent{pc.genesis.id});
}

void World::enqueue_tx(PerChain& pc, Transaction tx, Tick now) {
    if (tx.kind == TxKind::SyncMirror)
        pc.pending_mirrors.push_back(std::move(tx));
    else
        pc.pending_local.push_back(std::move(tx));
    schedule_block(pc, now + pc.genesis.block_interval);
}

void World::run_until_quiescent(std::size_t max_events) {
    while (auto ev = queue_.pop()) {
        if (metrics_.events_executed++ >= max_events)
            throw SimInvariantViolation("event budget exhausted; simulation did not quiesce");
        now_ = ev->tick;
        on_event(*ev);
    }
}

void World::on_event(const SimEvent& ev) {
    bool mirror_applied = false;
    const ChainId* block_chain = nullptr;
    ChainId block_chain_storage;

    if (const auto* block = std::get_if<BlockProductionEvent>(&ev.payload)) {
        PerChain& pc = per(block->chain);
        block_chain_storage = block->chain;
        block_chain = &block_chain_storage;
        Tick tick = ev.tick;

        pc.block_scheduled = false;
        std::vector<Transaction> txs = std::move(pc.pending_local);
        pc.pending_local.clear();
        for (Transaction& m : pc.pending_mirrors) txs.push_back(std::move(m));
        pc.pending_mirrors.clear();

        // keys written on the compact chain whose mirrors have not landed yet
        std::set<KeyRef> in_flight;
        for (const Parked& p : pc.parked)
            for (const auto& [ref, value] : p.outcome.exec.writes) in_flight.insert(ref);

        pc.block_events.clear();
        InitiateInterceptor interceptor(*this, pc);
        Block block_obj = pc.chain.mine_block(std::move(txs), tick, &interceptor);
        trace_.line(tick, "block", chain_tag(pc.genesis.id), "-", digest_tag(block_obj.digest()));

        const auto& receipts = pc.chain.receipts_at(block_obj.height);
        for (const Receipt& r : receipts)
            if (r.ok && r.kind == TxKind::SyncMirror) {
                mirror_applied = true;
                ++metrics_.mirror_txs;
            }

        CompactBlock sync_block = pc.sync.on_main_block(block_obj, receipts, pc.genesis.exposure,
                                                        pc.compact, in_flight, tick);
        trace_.line(tick, "compact", chain_tag(pc.genesis.id), "-", digest_tag(sync_block.digest()));

        auto events = std::move(pc.block_events);
        pc.block_events.clear();
        for (auto& [request_ev, action_id] : events)
            forward_request(pc, request_ev, tick, /*fee_exempt=*/false, action_id);

        release_finalized(pc, tick);

        if (!pc.pending_local.empty() || !pc.pending_mirrors.empty() || !pc.parked.empty())
            schedule_block(pc, tick + pc.genesis.block_interval);
    } else if (const auto* delivery = std::get_if<DeliveryEvent>(&ev.payload)) {
        on_delivery(delivery->envelope, ev.tick);
    } else if (const auto* action = std::get_if<ScenarioActionEvent>(&ev.payload)) {
        on_action(action->action_id, ev.tick);
    }

    if (isolation_watch_) isolation_check(ev, mirror_applied, block_chain);
}

void World::on_action(std::uint64_t action_id, Tick tick) {
    PendingAction& action = actions_.at(action_id);
    PerChain& pc = per(action.chain);

    Transaction tx = action.tx;
    tx.nonce = pc.assign_nonce[tx.sender]++;
    if (action.kind == PendingAction::Kind::Initiate)
        action_tags_[{action.chain, tx.sender, tx.nonce}] = action_id;

    trace_.line(tick, "action", chain_tag(action.chain), "-", digest_tag(tx.digest()));
    enqueue_tx(pc, std::move(tx), tick);
}

std::optional<CallResult> World::intercept_tx(PerChain& pc, const Transaction& tx, Tick now) {
    if (tx.kind != TxKind::Local || !(tx.target == router_address())) return std::nullopt;
    if (!(tx.selector == kInitiateSelector))
        return CallResult::failed("UnknownSelector");

    ChainId target_chain;
    ExternalContract target;
    Callback callback;
    try {
        std::vector<std::uint8_t> raw = words_to_bytes(tx.params);
        Decoder d(raw);
        target_chain = d.fixed<32>();
        target.contract_address = d.fixed<20>();
        target.function_selector = d.fixed<4>();
        target.params = d.words();
        callback.chain = d.fixed<32>();
        callback.callback_address = d.fixed<20>();
        callback.callback_selector = d.fixed<4>();
    } catch (const std::exception&) {
        return CallResult::failed("MalformedInitiate");
    }

    std::uint64_t action_id = std::uint64_t(-1);
    if (auto it = action_tags_.find({pc.genesis.id, tx.sender, tx.nonce});
        it != action_tags_.end())
        action_id = it->second;

    ++metrics_.initiate_attempts;
    RequestId rid = pc.router.compute_request_id(tx.sender, now, pc.router.peek_nonce(tx.sender));

    FeeUnits cd = estimate_destination_cost(target_chain, target);
    AdmissionResult admission =
        ledger_.admission_check({pc.genesis.id, tx.sender}, rid, cd, pc.chain.fees());
    if (!admission.accepted) {
        ++metrics_.admission_refused;
        return CallResult::failed("AdmissionRefused");
    }
    ++metrics_.admission_accepted;

    std::pair<RequestId, CrossChainRequestEvent> initiated;
    try {
        initiated = pc.router.initiate_cross_chain_call(target_chain, std::move(target),
                                                        std::move(callback), tx.sender, now);
    } catch (const UnknownTargetChain&) {
        ledger_.settle_or_refund(rid, {SettleOutcome::Kind::Failed, 0}, pc.genesis.id,
                                 target_chain, pc.chain.fees());
        trace_.line(now, "settle", chain_tag(pc.genesis.id), request_tag(rid), "-");
        return CallResult::failed("UnknownTargetChain");
    }

    if (!(initiated.first == rid))
        throw SimInvariantViolation("request id preview diverged from router assignment");

    RequestInfo info;
    info.source = pc.genesis.id;
    info.destination = target_chain;
    info.sender = tx.sender;
    info.initiated = now;
    info.fee_exempt = false;
    info.action_id = action_id;
    info.locked = admission.locked;
    requests_.emplace(rid, info);

    pc.block_events.emplace_back(initiated.second, action_id);

    CallResult res;
    res.ok = true;
    Word rid_word;
    rid_word.bytes = rid.bytes;
    res.return_data = {rid_word};
    res.cost = pc.chain.fees().per_call;
    return res;
}

FeeUnits World::estimate_destination_cost(const ChainId& target_chain,
                                          const ExternalContract& target) const {
    auto it = chains_.find(target_chain);
    if (it == chains_.end()) return FeeSchedule{}.estimate_cd(0);
    const PerChain& dest = *it->second;
    const ContractAccount* account = dest.chain.find_contract(target.contract_address);
    if (!account) return dest.genesis.fees.estimate_cd(0);
    auto fit = account->functions.find(target.function_selector);
    if (fit == account->functions.end()) return dest.genesis.fees.estimate_cd(0);
    return dest.genesis.fees.estimate_cd(fit->second.declared_writes());
}

void World::forward_request(PerChain& source, const CrossChainRequestEvent& ev, Tick tick,
                            bool fee_exempt, std::uint64_t action_id) {
    const RequestId& rid = ev.call.request_id;
    if (!requests_.contains(rid)) {
        RequestInfo info;
        info.source = source.genesis.id;
        info.destination = ev.target_chain;
        info.sender = ev.call.sender;
        info.initiated = tick;
        info.fee_exempt = fee_exempt;
        info.action_id = action_id;
        requests_.emplace(rid, info);
    }
    ++metrics_.requests_emitted;
    trace_.line(tick, "request", chain_tag(source.genesis.id), request_tag(rid),
                digest_tag(ev.call.digest()));

    auto enode = enodes_.resolve(ev.target_chain);
    if (!enode) {
        auto settled = settle(rid, SettleOutcome::Kind::Failed, 0, tick);
        settled.kind = RequestOutcome::Kind::Unroutable;
        settled.detail = "UnknownChain";
        record_outcome(rid, settled);
        return;
    }

    // drop draw first, then latency, so the stream layout is fixed
    bool dropped = transport_rng_.chance(config_.transport.drop_probability);
    Tick latency =
        transport_rng_.between(config_.transport.latency_min, config_.transport.latency_max);

    Envelope env;
    env.from_chain = source.genesis.id;
    env.to_chain = ev.target_chain;
    env.payload = ev.call.canonical_bytes();
    env.enqueue_tick = tick;
    env.deliver_tick = tick + std::max<Tick>(1, latency);

    if (dropped) {
        ++metrics_.envelopes_dropped;
        trace_.line(tick, "drop", chain_tag(ev.target_chain), request_tag(rid),
                    digest_tag(env.payload_digest()));
        auto settled = settle(rid, SettleOutcome::Kind::Failed, 0, tick);
        settled.kind = RequestOutcome::Kind::Dropped;
        settled.detail = "TransportDrop";
        record_outcome(rid, settled);
        return;
    }

    queue_.push(env.deliver_tick, DeliveryEvent{std::move(env)});
}

void World::on_delivery(const Envelope& env, Tick tick) {
    PerChain& pc = per(env.to_chain);
    CrossChainCall call = CrossChainCall::decode(env.payload);
    ++metrics_.envelopes_delivered;
    trace_.line(tick, "deliver", chain_tag(env.to_chain), request_tag(call.request_id),
                digest_tag(env.payload_digest()));

    Digest tx_digest = call.digest();
    pc.mempool.submit(tx_digest, call.request_id, pc.chain.height(), false);

    Router::IncomingOutcome outcome =
        pc.router.execute_incoming(call, pc.compact, pc.genesis.exposure, pc.genesis.fees);

    if (!outcome.executed) {
        pc.mempool.mark_rejected(tx_digest);
        ++metrics_.executions_rejected;
        auto settled = settle(call.request_id, SettleOutcome::Kind::Failed, 0, tick);
        settled.kind = RequestOutcome::Kind::Rejected;
        settled.detail = outcome.error;
        record_outcome(call.request_id, settled);
        return;
    }

    ++metrics_.executions_ok;
    trace_.line(tick, "compact", chain_tag(pc.genesis.id), request_tag(call.request_id),
                digest_tag(pc.compact.blocks().back().digest()));

    if (config_.auth.trust_compact_validation) pc.mempool.mark_via_compact(tx_digest);

    auto finalized = pc.mempool.finalize_ready(pc.chain.height());
    bool ours_ready = false;
    for (const XChainMempoolEntry& entry : finalized) {
        if (entry.tx_digest == tx_digest) {
            ours_ready = true;
            continue;
        }
        auto it = std::find_if(pc.parked.begin(), pc.parked.end(), [&](const Parked& p) {
            return p.call.digest() == entry.tx_digest;
        });
        if (it == pc.parked.end()) continue;
        Parked parked = std::move(*it);
        pc.parked.erase(it);
        complete_finalized(pc, parked.call, parked.outcome, tick);
    }
    if (ours_ready) {
        complete_finalized(pc, call, outcome, tick);
    } else {
        pc.parked.push_back({call, std::move(outcome)});
        schedule_block(pc, tick + pc.genesis.block_interval);
    }
}

void World::release_finalized(PerChain& pc, Tick tick) {
    auto finalized = pc.mempool.finalize_ready(pc.chain.height());
    for (const XChainMempoolEntry& entry : finalized) {
        auto it = std::find_if(pc.parked.begin(), pc.parked.end(), [&](const Parked& p) {
            return p.call.digest() == entry.tx_digest;
        });
        if (it == pc.parked.end()) continue;
        Parked parked = std::move(*it);
        pc.parked.erase(it);
        complete_finalized(pc, parked.call, parked.outcome, tick);
    }
}

void World::complete_finalized(PerChain& pc, const CrossChainCall& call,
                               Router::IncomingOutcome& outcome, Tick tick) {
    // 1. mirror the execution's write set onto the main chain
    if (auto mirror =
            Synchronizer::on_compact_exec(outcome.exec, pc.assign_nonce[system_sender()])) {
        ++pc.assign_nonce[system_sender()];
        enqueue_tx(pc, std::move(*mirror), tick);
    }

    // 2. settle the prepaid fee at destination completion
    auto settled = settle(call.request_id, SettleOutcome::Kind::Executed, outcome.exec.cost, tick);
    settled.kind = RequestOutcome::Kind::Executed;

    // 3. route the callback
    pc.router.route_callback(call, outcome, pc.compact, pc.genesis.exposure, pc.genesis.fees,
                             tick);
    switch (outcome.next) {
        case Router::IncomingOutcome::Next::None:
            settled.detail = outcome.forward_error.empty()
                                 ? "fire-and-forget"
                                 : "callback-unroutable:" + outcome.forward_error;
            break;
        case Router::IncomingOutcome::Next::LocalCallback: {
            ++metrics_.callbacks_local;
            settled.detail = outcome.local_result.status ? "local-callback" : "local-callback-failed";
            Encoder enc;
            enc.words(outcome.local_result.result);
            trace_.line(tick, "callback", chain_tag(pc.genesis.id), request_tag(call.request_id),
                        digest_tag(enc.digest()));
            if (auto mirror = Synchronizer::on_compact_exec(outcome.callback_exec,
                                                            pc.assign_nonce[system_sender()])) {
                ++pc.assign_nonce[system_sender()];
                enqueue_tx(pc, std::move(*mirror), tick);
            }
            break;
        }
        case Router::IncomingOutcome::Next::RemoteCallback:
            ++metrics_.callbacks_forwarded;
            settled.detail = "callback-forwarded";
            forward_request(pc, outcome.forwarded, tick, /*fee_exempt=*/true,
                            std::uint64_t(-1));
            break;
    }

    record_outcome(call.request_id, settled);
}

RequestOutcome World::settle(const RequestId& request, SettleOutcome::Kind kind,
                             FeeUnits actual_cost, Tick tick) {
    RequestOutcome out;
    out.terminal_tick = tick;

    auto it = requests_.find(request);
    if (it == requests_.end() || it->second.fee_exempt || !ledger_.has_lock(request)) return out;

    const RequestInfo& info = it->second;
    FeeUnits locked = ledger_.locked_amount(request);
    ledger_.settle_or_refund(request, {kind, actual_cost}, info.source, info.destination,
                             per(info.source).chain.fees());
    trace_.line(tick, "settle", chain_tag(info.source), request_tag(request), "-");

    if (kind == SettleOutcome::Kind::Executed) {
        out.consumed = actual_cost < locked ? actual_cost : locked;
        out.refunded = locked - out.consumed;
    } else {
        FeeUnits f_base = per(info.source).chain.fees().f_base;
        out.burned = f_base < locked ? f_base : locked;
        out.refunded = locked - out.burned;
    }
    return out;
}

void World::record_outcome(const RequestId& request, RequestOutcome outcome) {
    if (outcomes_.contains(request))
        throw SimInvariantViolation("request 0x" + request.hex_prefix(8) +
                                    " reached two terminal outcomes");
    outcomes_.emplace(request, std::move(outcome));
}

void World::isolation_check(const SimEvent& ev, bool mirror_applied, const ChainId* block_chain) {
    for (auto& [id, pc] : chains_) {
        Digest current = pc->chain.state_digest();
        Digest& last = last_main_digest_[id];
        if (current == last) continue;
        bool allowed = mirror_applied && block_chain && *block_chain == id;
        if (!allowed)
            throw SimInvariantViolation(
                "S_main of chain 0x" + id.hex_tail(4) + " changed at tick " +
                std::to_string(ev.tick) + " outside a SyncMirror application");
        last = current;
    }
}

}  // namespace crosslink
