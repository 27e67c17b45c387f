#include <doctest.h>

#include "crosslink/chain.hpp"
#include "crosslink/keccak.hpp"
#include "crosslink/netsim.hpp"

using namespace crosslink;

namespace {

const Selector kGet = selector_of("getValue()");
const Selector kSet = selector_of("setValue(uint256)");

ContractAccount reader_contract(std::uint64_t stored) {
    ContractAccount c;
    c.address = Address::from_hex("0xa1");
    c.functions.emplace(kGet, FunctionShape{kGet, FunctionKind::ReadSlot, Word{}, "getValue()"});
    c.storage[Word{}] = Word::from_u64(stored);
    return c;
}

ContractAccount writer_contract() {
    ContractAccount c;
    c.address = Address::from_hex("0xa2");
    c.functions.emplace(kGet, FunctionShape{kGet, FunctionKind::ReadSlot, Word{}, "getValue()"});
    c.functions.emplace(kSet,
                        FunctionShape{kSet, FunctionKind::WriteSlot, Word{}, "setValue(uint256)"});
    c.storage[Word{}] = Word::from_u64(0);
    return c;
}

ChainState fresh_chain() {
    ChainState chain(ChainId::from_u64(1), FeeSchedule{10, 3, 2, 1, 1});
    chain.register_contract(reader_contract(42));
    chain.register_contract(writer_contract());
    return chain;
}

Transaction set_tx(std::uint64_t value, std::uint64_t nonce, Address sender = Address::from_hex("0xe0")) {
    Transaction tx;
    tx.sender = sender;
    tx.target = Address::from_hex("0xa2");
    tx.selector = kSet;
    tx.params = {Word::from_u64(value)};
    tx.nonce = nonce;
    return tx;
}

}  // namespace

TEST_CASE("register_contract") {
    ChainState chain(ChainId::from_u64(1), FeeSchedule{});

    SUBCASE("seeded storage is immediately callable") {
        chain.register_contract(reader_contract(42));
        auto res = chain.call_function(Address::from_hex("0xa1"), kGet, {});
        CHECK(res.ok);
        REQUIRE(res.return_data.size() == 1);
        CHECK(res.return_data[0] == Word::from_u64(42));
    }

    SUBCASE("writer contract reads back zero before any write") {
        chain.register_contract(writer_contract());
        auto res = chain.call_function(Address::from_hex("0xa2"), kGet, {});
        CHECK(res.ok);
        CHECK(res.return_data[0] == Word::from_u64(0));
    }

    SUBCASE("duplicate address refused") {
        chain.register_contract(reader_contract(42));
        CHECK_THROWS_AS(chain.register_contract(reader_contract(1)), DuplicateAddress);
    }

    SUBCASE("reserved system addresses refused") {
        ContractAccount c = reader_contract(1);
        c.address = router_address();
        CHECK_THROWS_AS(chain.register_contract(c), DuplicateAddress);
    }
}

TEST_CASE("call_function") {
    ChainState chain = fresh_chain();

    SUBCASE("getValue returns the stored word at base cost, state unchanged") {
        Digest before = chain.state_digest();
        auto res = chain.call_function(Address::from_hex("0xa1"), kGet, {});
        CHECK(res.ok);
        CHECK(res.return_data[0] == Word::from_u64(42));
        CHECK(res.cost == 3);  // per_call, no writes
        CHECK(res.writes.empty());
        CHECK(chain.state_digest() == before);
    }

    SUBCASE("setValue stores the word and returns encoded true") {
        std::vector<Word> params{Word::from_u64(99)};
        auto res = chain.call_function(Address::from_hex("0xa2"), kSet, params);
        CHECK(res.ok);
        CHECK(res.return_data[0] == bool_word(true));
        CHECK(res.cost == 5);  // per_call + per_write
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word{}) == Word::from_u64(99));
    }

    SUBCASE("unknown address fails with empty data and zero cost") {
        auto res = chain.call_function(Address::from_hex("0xff"), kGet, {});
        CHECK(!res.ok);
        CHECK(res.error == "UnknownAddress");
        CHECK(res.return_data.empty());
        CHECK(res.cost == 0);
    }

    SUBCASE("unknown selector fails the same way") {
        auto res = chain.call_function(Address::from_hex("0xa1"), selector_of("nope()"), {});
        CHECK(!res.ok);
        CHECK(res.error == "UnknownSelector");
    }

    SUBCASE("write without parameters fails") {
        auto res = chain.call_function(Address::from_hex("0xa2"), kSet, {});
        CHECK(!res.ok);
        CHECK(res.error == "MissingParam");
    }
}

TEST_CASE("mine_block") {
    ChainState chain = fresh_chain();

    SUBCASE("empty block advances height but not state") {
        Digest state_before = chain.state_digest();
        Block b = chain.mine_block({}, 5);
        CHECK(b.height == 1);
        CHECK(b.timestamp == 5);
        CHECK(b.state_digest == state_before);
        CHECK(chain.height() == 1);
    }

    SUBCASE("a write lands and matches a replay through call_function") {
        ChainState replay = fresh_chain();

        Block b = chain.mine_block({set_tx(7, 0)}, 1);
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word{}) == Word::from_u64(7));

        // same transaction applied through the direct call path must
        // reproduce the block's recorded post-state digest
        std::vector<Word> params{Word::from_u64(7)};
        replay.call_function(Address::from_hex("0xa2"), kSet, params);
        CHECK(replay.state_digest() == b.state_digest);
    }

    SUBCASE("nonce reuse skips the second transaction") {
        Block b = chain.mine_block({set_tx(1, 0), set_tx(2, 0)}, 1);
        const auto& receipts = chain.receipts_at(b.height);
        REQUIRE(receipts.size() == 2);
        CHECK(receipts[0].ok);
        CHECK(!receipts[1].ok);
        CHECK(receipts[1].error == "InvalidNonce");
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word{}) == Word::from_u64(1));
    }

    SUBCASE("zero gas limit is rejected") {
        Transaction tx = set_tx(1, 0);
        tx.gas_limit = 0;
        chain.mine_block({tx}, 1);
        CHECK(chain.receipts_at(1)[0].error == "BadGasLimit");
    }

    SUBCASE("insufficient gas fails without touching storage") {
        Transaction tx = set_tx(123, 0);
        tx.gas_limit = 4;  // needs per_call + per_write = 5
        chain.mine_block({tx}, 1);
        CHECK(chain.receipts_at(1)[0].error == "OutOfGas");
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word{}) == Word::from_u64(0));
    }

    SUBCASE("cross-chain inbound transactions are refused on the main chain") {
        Transaction tx = set_tx(5, 0);
        tx.kind = TxKind::CrossChainInbound;
        Digest before = chain.state_digest();
        chain.mine_block({tx}, 1);
        CHECK(chain.receipts_at(1)[0].error == "CrossChainInboundOnMain");
        CHECK(chain.state_digest() == before);
    }
}

TEST_CASE("sync mirror transactions") {
    ChainState chain = fresh_chain();

    SUBCASE("mirror replays its write set into storage") {
        std::vector<std::pair<Word, Word>> writes{{Word{}, Word::from_u64(17)},
                                                  {Word::from_u64(1), Word::from_u64(9)}};
        Transaction tx = make_mirror_tx(Address::from_hex("0xa2"), writes, 0);
        chain.mine_block({tx}, 1);
        CHECK(chain.receipts_at(1)[0].ok);
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word{}) == Word::from_u64(17));
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word::from_u64(1)) == Word::from_u64(9));
    }

    SUBCASE("only the system sender may mirror") {
        std::vector<std::pair<Word, Word>> writes{{Word{}, Word::from_u64(17)}};
        Transaction tx = make_mirror_tx(Address::from_hex("0xa2"), writes, 0);
        tx.sender = Address::from_hex("0xe0");
        chain.mine_block({tx}, 1);
        CHECK(chain.receipts_at(1)[0].error == "MirrorSenderForbidden");
        CHECK(chain.storage_at(Address::from_hex("0xa2"), Word{}) == Word::from_u64(0));
    }
}

TEST_CASE("determinism: identical genesis and txs give identical digests") {
    Rng rng(99);
    std::vector<Transaction> txs;
    for (std::uint64_t i = 0; i < 20; ++i) txs.push_back(set_tx(rng.below(1000), i));

    ChainState a = fresh_chain();
    ChainState b = fresh_chain();
    for (std::size_t i = 0; i < txs.size(); i += 5) {
        std::vector<Transaction> batch(txs.begin() + i, txs.begin() + std::min(i + 5, txs.size()));
        Block ba = a.mine_block(batch, i);
        Block bb = b.mine_block(batch, i);
        CHECK(ba.state_digest == bb.state_digest);
        CHECK(ba.digest() == bb.digest());
    }
}

TEST_CASE("pure reads never move the state digest") {
    ChainState chain = fresh_chain();
    chain.mine_block({set_tx(55, 0)}, 1);
    Digest before = chain.state_digest();

    Rng rng(7);
    for (int i = 0; i < 50; ++i) {
        Address target = rng.chance(0.5) ? Address::from_hex("0xa1") : Address::from_hex("0xa2");
        chain.call_function(target, kGet, {});
        CHECK(chain.state_digest() == before);
    }
}

TEST_CASE("replay equivalence over random transaction sequences") {
    Rng rng(2024);
    for (int round = 0; round < 10; ++round) {
        ChainState mined = fresh_chain();
        ChainState replayed = fresh_chain();

        std::vector<Transaction> txs;
        for (std::uint64_t i = 0; i < rng.below(10) + 1; ++i)
            txs.push_back(set_tx(rng.below(1'000'000), i));

        Block b = mined.mine_block(txs, 1);
        for (const Transaction& tx : txs)
            replayed.call_function(tx.target, tx.selector, tx.params);
        CHECK(replayed.state_digest() == b.state_digest);
    }
}
