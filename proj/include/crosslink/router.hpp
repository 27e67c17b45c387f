#pragma once

#include <map>
#include <set>
#include <string>

#include "crosslink/compact.hpp"
#include "crosslink/messages.hpp"

namespace crosslink {

// Per-chain router: packages outgoing requests, executes incoming ones
// against the chain's compact state, and routes callbacks. Mirrors the
// on-chain contract's behavior: a failed target execution emits no callback,
// a zero callback address means fire-and-forget, a remote callback is
// re-initiated as a fresh fire-and-forget call carrying the return data.
class Router {
public:
    explicit Router(ChainId self) : chain_(self) { known_chains_.insert(self); }

    const ChainId& chain_id() const { return chain_; }
    void register_chain(const ChainId& id) { known_chains_.insert(id); }
    bool knows_chain(const ChainId& id) const { return known_chains_.contains(id); }

    // Builds the request envelope and event. The request id hashes
    // (tick, sender, per-sender nonce); the nonce term keeps two same-tick
    // requests from one sender distinct.
    std::pair<RequestId, CrossChainRequestEvent> initiate_cross_chain_call(
        const ChainId& target_chain, ExternalContract target, Callback callback,
        const Address& sender, Tick now);  // throws UnknownTargetChain

    struct IncomingOutcome {
        bool executed = false;
        std::string error;
        CompactExecResult exec;
        enum class Next : std::uint8_t { None, LocalCallback, RemoteCallback } next = Next::None;
        CallBackResultEvent local_result;       // set when next == LocalCallback
        CompactExecResult callback_exec;        // the local callback's own execution
        CrossChainRequestEvent forwarded;       // set when next == RemoteCallback
        RequestId forwarded_request;
        std::string forward_error;              // callback chain unknown to this router
    };

    // First pipeline half: the zero-address guard plus the compact-chain
    // execution. The result's callback has not been routed yet.
    IncomingOutcome execute_incoming(const CrossChainCall& call, CompactChain& compact,
                                     const ExposurePolicy& policy, const FeeSchedule& fees);

    // Second half, run once the mempool entry finalizes: resolves the
    // callback branch exactly as the contract does.
    void route_callback(const CrossChainCall& call, IncomingOutcome& out, CompactChain& compact,
                        const ExposurePolicy& policy, const FeeSchedule& fees, Tick now);

    // Both halves composed; the whole destination-side step for flows where
    // finalization is immediate.
    IncomingOutcome handle_incoming(const CrossChainCall& call, CompactChain& compact,
                                    const ExposurePolicy& policy, const FeeSchedule& fees,
                                    Tick now);

    // Invokes a local callback (callback.chain == this chain) with the
    // returned data. Missing or unauthorized callback targets yield a
    // status=false result event rather than an error.
    CallBackResultEvent deliver_callback(const RequestId& request_id, const Callback& callback,
                                         std::vector<Word> return_data, CompactChain& compact,
                                         const ExposurePolicy& policy, const FeeSchedule& fees,
                                         CompactExecResult* exec_out = nullptr);

    RequestId compute_request_id(const Address& sender, Tick now, std::uint64_t nonce) const;
    std::uint64_t peek_nonce(const Address& sender) const;

private:
    ChainId chain_;
    std::set<ChainId> known_chains_;
    std::map<Address, std::uint64_t> request_nonces_;
};

}  // namespace crosslink
