#include "crosslink/router.hpp"

namespace crosslink {

RequestId Router::compute_request_id(const Address& sender, Tick now, std::uint64_t nonce) const {
    // (tick, sender) alone collides across routers and within a block; the
    // chain id and a per-sender counter keep ids unique per simulation
    Encoder e;
    e.fixed(chain_).u64(now).fixed(sender).u64(nonce);
    return e.digest();
}

std::uint64_t Router::peek_nonce(const Address& sender) const {
    auto it = request_nonces_.find(sender);
    return it == request_nonces_.end() ? 0 : it->second;
}

std::pair<RequestId, CrossChainRequestEvent> Router::initiate_cross_chain_call(
    const ChainId& target_chain, ExternalContract target, Callback callback,
    const Address& sender, Tick now) {
    if (!known_chains_.contains(target_chain))
        throw UnknownTargetChain("chain 0x" + target_chain.hex_tail(4) + " not registered");

    std::uint64_t nonce = request_nonces_[sender]++;
    RequestId id = compute_request_id(sender, now, nonce);

    CrossChainRequestEvent ev;
    ev.target_chain = target_chain;
    ev.call = CrossChainCall{id, sender, std::move(target), std::move(callback)};
    return {id, ev};
}

Router::IncomingOutcome Router::execute_incoming(const CrossChainCall& call,
                                                 CompactChain& compact,
                                                 const ExposurePolicy& policy,
                                                 const FeeSchedule& fees) {
    IncomingOutcome out;

    if (call.target.contract_address.is_zero()) {
        out.error = "InvalidContractAddress";
        return out;
    }

    out.exec = compact.apply_cross_chain_tx(policy, call, fees);
    out.executed = out.exec.ok;
    if (!out.exec.ok) {
        // no callback for a failed execution; the auth layer records the
        // failure and settles the fee
        out.error = out.exec.error;
    }
    return out;
}

void Router::route_callback(const CrossChainCall& call, IncomingOutcome& out,
                            CompactChain& compact, const ExposurePolicy& policy,
                            const FeeSchedule& fees, Tick now) {
    if (!out.executed || call.callback.is_null()) return;

    if (call.callback.chain == chain_) {
        out.next = IncomingOutcome::Next::LocalCallback;
        out.local_result = deliver_callback(call.request_id, call.callback, out.exec.return_data,
                                            compact, policy, fees, &out.callback_exec);
        return;
    }

    // Remote callback: re-initiate toward the callback chain, carrying the
    // return data as params with an empty callback (one-hop chains only).
    ExternalContract forward;
    forward.contract_address = call.callback.callback_address;
    forward.function_selector = call.callback.callback_selector;
    forward.params = out.exec.return_data;

    if (!known_chains_.contains(call.callback.chain)) {
        out.forward_error = "UnknownTargetChain";
        return;
    }

    auto [request, ev] = initiate_cross_chain_call(call.callback.chain, std::move(forward),
                                                   Callback{}, router_address(), now);
    out.next = IncomingOutcome::Next::RemoteCallback;
    out.forwarded = std::move(ev);
    out.forwarded_request = request;
}

Router::IncomingOutcome Router::handle_incoming(const CrossChainCall& call, CompactChain& compact,
                                                const ExposurePolicy& policy,
                                                const FeeSchedule& fees, Tick now) {
    IncomingOutcome out = execute_incoming(call, compact, policy, fees);
    route_callback(call, out, compact, policy, fees, now);
    return out;
}

CallBackResultEvent Router::deliver_callback(const RequestId& request_id, const Callback& callback,
                                             std::vector<Word> return_data, CompactChain& compact,
                                             const ExposurePolicy& policy, const FeeSchedule& fees,
                                             CompactExecResult* exec_out) {
    CrossChainCall invocation;
    invocation.request_id = request_id;
    invocation.sender = router_address();
    invocation.target.contract_address = callback.callback_address;
    invocation.target.function_selector = callback.callback_selector;
    invocation.target.params = std::move(return_data);
    invocation.callback = Callback{};

    CompactExecResult exec = compact.apply_cross_chain_tx(policy, invocation, fees);

    CallBackResultEvent ev;
    ev.request_id = request_id;
    ev.status = exec.ok;
    ev.result = exec.return_data;
    if (exec_out) *exec_out = std::move(exec);
    return ev;
}

}  // namespace crosslink
