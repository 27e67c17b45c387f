#include <doctest.h>

#include "crosslink/router.hpp"

using namespace crosslink;

namespace {

const ChainId kChainA = ChainId::from_u64(1);
const ChainId kChainB = ChainId::from_u64(2);
const Selector kGet = selector_of("getValue()");
const Selector kSet = selector_of("setValue(uint256)");
const Selector kHandleResult = selector_of("handleResult(uint256)");
const Selector kHandleWrite = selector_of("handleWriteResult(bool)");
const Address kProvider = Address::from_hex("0xa1");
const Address kReceiver = Address::from_hex("0xb1");

// destination-chain rig: provider contract exposed for reads and writes plus
// a local callback receiver
struct Rig {
    ChainState main{kChainA, FeeSchedule{10, 3, 2, 1, 1}};
    ExposurePolicy policy;
    CompactChain compact{kChainA};
    Router router{kChainA};

    Rig() {
        ContractAccount provider;
        provider.address = kProvider;
        provider.functions.emplace(kGet,
                                   FunctionShape{kGet, FunctionKind::ReadSlot, Word{}, "getValue()"});
        provider.functions.emplace(
            kSet, FunctionShape{kSet, FunctionKind::WriteSlot, Word{}, "setValue(uint256)"});
        provider.storage[Word{}] = Word::from_u64(42);
        main.register_contract(provider);

        ContractAccount receiver;
        receiver.address = kReceiver;
        receiver.functions.emplace(
            kHandleResult,
            FunctionShape{kHandleResult, FunctionKind::StoreParam, Word{}, "handleResult(uint256)"});
        receiver.functions.emplace(
            kHandleWrite, FunctionShape{kHandleWrite, FunctionKind::StoreParam, Word::from_u64(1),
                                        "handleWriteResult(bool)"});
        main.register_contract(receiver);

        auto expose = [&](Address c, Selector s, ExposureMode m, Word key) {
            ExposureEntry e;
            e.contract = c;
            e.selector = s;
            e.storage_keys.insert(key);
            e.mode = m;
            policy.entries.push_back(e);
        };
        expose(kProvider, kGet, ExposureMode::ReadOnly, Word{});
        expose(kProvider, kSet, ExposureMode::ReadWrite, Word{});
        expose(kReceiver, kHandleResult, ExposureMode::ReadWrite, Word{});
        expose(kReceiver, kHandleWrite, ExposureMode::ReadWrite, Word::from_u64(1));

        compact.authorize(policy, main);
        router.register_chain(kChainB);
    }

    FeeSchedule fees{10, 3, 2, 1, 1};
};

CrossChainCall inbound_read(const Callback& cb, std::uint64_t tag = 1) {
    CrossChainCall call;
    call.request_id = RequestId::from_u64(tag);
    call.sender = Address::from_hex("0xe0");
    call.target = {kProvider, kGet, {}};
    call.callback = cb;
    return call;
}

}  // namespace

TEST_CASE("initiate_cross_chain_call") {
    Rig rig;

    SUBCASE("the request event carries the paper's selector pair") {
        ExternalContract target{kProvider, selector_of("getValue()"), {}};
        Callback cb{kChainB, kReceiver, selector_of("handleResult(uint256)")};
        auto [rid, ev] =
            rig.router.initiate_cross_chain_call(kChainB, target, cb, kReceiver, 3);

        CHECK(ev.target_chain == kChainB);
        CHECK(ev.call.request_id == rid);
        CHECK(ev.call.sender == kReceiver);
        CHECK(ev.call.target.function_selector.hex() == "20965255");
        CHECK(ev.call.callback.callback_selector.hex() == "c2d57bbc");
        CHECK(ev.call.callback.chain == kChainB);
    }

    SUBCASE("unknown target chain is refused") {
        ExternalContract target{kProvider, kGet, {}};
        CHECK_THROWS_AS(rig.router.initiate_cross_chain_call(ChainId::from_u64(0x99), target,
                                                             Callback{}, kReceiver, 3),
                        UnknownTargetChain);
    }

    SUBCASE("same sender, same tick: the nonce keeps request ids distinct") {
        ExternalContract target{kProvider, kGet, {}};
        auto [rid1, ev1] =
            rig.router.initiate_cross_chain_call(kChainB, target, Callback{}, kReceiver, 3);
        auto [rid2, ev2] =
            rig.router.initiate_cross_chain_call(kChainB, target, Callback{}, kReceiver, 3);
        CHECK(rid1 != rid2);

        // hashing oracle: recompute both preimages by hand
        auto manual = [&](std::uint64_t nonce) {
            Encoder e;
            e.fixed(kChainA).u64(3).fixed(kReceiver).u64(nonce);
            return e.digest();
        };
        CHECK(rid1 == manual(0));
        CHECK(rid2 == manual(1));
    }
}

TEST_CASE("handle_incoming") {
    Rig rig;

    SUBCASE("read with a remote callback re-initiates carrying the data") {
        Callback cb{kChainB, kReceiver, kHandleResult};
        auto out = rig.router.handle_incoming(inbound_read(cb), rig.compact, rig.policy, rig.fees, 5);

        CHECK(out.executed);
        REQUIRE(out.next == Router::IncomingOutcome::Next::RemoteCallback);
        CHECK(out.forwarded.target_chain == kChainB);
        CHECK(out.forwarded.call.target.contract_address == kReceiver);
        CHECK(out.forwarded.call.target.function_selector == kHandleResult);
        REQUIRE(out.forwarded.call.target.params.size() == 1);
        CHECK(out.forwarded.call.target.params[0] == Word::from_u64(42));
        // the re-initiated call is fire-and-forget: one-hop callback chains
        CHECK(out.forwarded.call.callback.is_null());
        CHECK(out.forwarded.call.request_id != inbound_read(cb).request_id);
    }

    SUBCASE("write with a remote callback forwards encoded true") {
        CrossChainCall call;
        call.request_id = RequestId::from_u64(2);
        call.sender = Address::from_hex("0xe0");
        call.target = {kProvider, kSet, {Word::from_u64(7)}};
        call.callback = {kChainB, kReceiver, kHandleWrite};

        auto out = rig.router.handle_incoming(call, rig.compact, rig.policy, rig.fees, 5);
        CHECK(out.executed);
        CHECK(rig.compact.at({kProvider, Word{}}) == Word::from_u64(7));
        REQUIRE(out.next == Router::IncomingOutcome::Next::RemoteCallback);
        REQUIRE(out.forwarded.call.target.params.size() == 1);
        CHECK(out.forwarded.call.target.params[0] == bool_word(true));
    }

    SUBCASE("zero target address fails before execution") {
        CrossChainCall call = inbound_read(Callback{});
        call.target.contract_address = Address{};
        auto out = rig.router.handle_incoming(call, rig.compact, rig.policy, rig.fees, 5);
        CHECK(!out.executed);
        CHECK(out.error == "InvalidContractAddress");
        CHECK(out.next == Router::IncomingOutcome::Next::None);
    }

    SUBCASE("failure silence: a failed execution never triggers a callback") {
        CrossChainCall call;
        call.request_id = RequestId::from_u64(3);
        call.target = {Address::from_hex("0x77"), kGet, {}};  // not exposed
        call.callback = {kChainB, kReceiver, kHandleResult};

        auto out = rig.router.handle_incoming(call, rig.compact, rig.policy, rig.fees, 5);
        CHECK(!out.executed);
        CHECK(out.error == "UnauthorizedTarget");
        CHECK(out.next == Router::IncomingOutcome::Next::None);
    }

    SUBCASE("fire-and-forget: zero callback address ends the flow") {
        auto out = rig.router.handle_incoming(inbound_read(Callback{}), rig.compact, rig.policy,
                                              rig.fees, 5);
        CHECK(out.executed);
        CHECK(out.next == Router::IncomingOutcome::Next::None);
        CHECK(out.forward_error.empty());
    }

    SUBCASE("local callback executes on this chain and emits the result event") {
        Callback cb{kChainA, kReceiver, kHandleResult};
        auto out = rig.router.handle_incoming(inbound_read(cb), rig.compact, rig.policy, rig.fees, 5);
        CHECK(out.executed);
        REQUIRE(out.next == Router::IncomingOutcome::Next::LocalCallback);
        CHECK(out.local_result.status);
        CHECK(rig.compact.at({kReceiver, Word{}}) == Word::from_u64(42));
    }

    SUBCASE("callback toward a chain this router does not know is flagged") {
        Callback cb{ChainId::from_u64(0x55), kReceiver, kHandleResult};
        auto out = rig.router.handle_incoming(inbound_read(cb), rig.compact, rig.policy, rig.fees, 5);
        CHECK(out.executed);
        CHECK(out.next == Router::IncomingOutcome::Next::None);
        CHECK(out.forward_error == "UnknownTargetChain");
    }
}

TEST_CASE("deliver_callback") {
    Rig rig;

    SUBCASE("handleResult stores the retrieved value") {
        auto ev = rig.router.deliver_callback(RequestId::from_u64(9),
                                              {kChainA, kReceiver, kHandleResult},
                                              {Word::from_u64(42)}, rig.compact, rig.policy,
                                              rig.fees);
        CHECK(ev.status);
        CHECK(ev.request_id == RequestId::from_u64(9));
        CHECK(rig.compact.at({kReceiver, Word{}}) == Word::from_u64(42));
    }

    SUBCASE("handleWriteResult stores the success flag") {
        auto ev = rig.router.deliver_callback(RequestId::from_u64(10),
                                              {kChainA, kReceiver, kHandleWrite},
                                              {bool_word(true)}, rig.compact, rig.policy, rig.fees);
        CHECK(ev.status);
        CHECK(rig.compact.at({kReceiver, Word::from_u64(1)}) == bool_word(true));
    }

    SUBCASE("a missing callback target reports status=false") {
        auto ev = rig.router.deliver_callback(RequestId::from_u64(11),
                                              {kChainA, Address::from_hex("0x77"), kHandleResult},
                                              {Word::from_u64(42)}, rig.compact, rig.policy,
                                              rig.fees);
        CHECK(!ev.status);
        CHECK(ev.result.empty());
    }
}

TEST_CASE("cross-chain call canonical encoding round-trips") {
    CrossChainCall call;
    call.request_id = RequestId::from_u64(77);
    call.sender = Address::from_hex("0xe0");
    call.target = {kProvider, kSet, {Word::from_u64(5), Word::from_u64(6)}};
    call.callback = {kChainB, kReceiver, kHandleResult};

    CrossChainCall decoded = CrossChainCall::decode(call.canonical_bytes());
    CHECK(decoded == call);
    CHECK(decoded.digest() == call.digest());
}
