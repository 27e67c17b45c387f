#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crosslink/encoding.hpp"
#include "crosslink/errors.hpp"
#include "crosslink/fees.hpp"
#include "crosslink/types.hpp"

namespace crosslink {

enum class TxKind : std::uint8_t { Local, CrossChainInbound, SyncMirror };

// The contract machine is a registered-function dispatch over 32-byte-word
// key-value storage. Three shapes cover every contract in scope:
//   ReadSlot   returns storage[slot], no writes          (getValue-style)
//   WriteSlot  storage[slot] = params[0], returns true   (setValue-style)
//   StoreParam storage[slot] = params[0], returns nothing (callback handlers)
enum class FunctionKind : std::uint8_t { ReadSlot, WriteSlot, StoreParam };

struct FunctionShape {
    Selector selector;
    FunctionKind kind = FunctionKind::ReadSlot;
    Word slot;
    std::string signature;

    std::size_t declared_writes() const { return kind == FunctionKind::ReadSlot ? 0 : 1; }
};

struct ContractAccount {
    Address address;
    std::map<Word, Word> storage;          // absent keys read as the zero word
    std::map<Selector, FunctionShape> functions;
};

struct Transaction {
    Address sender;
    Address target;
    Selector selector;
    std::vector<Word> params;
    std::uint64_t nonce = 0;
    FeeUnits gas_limit = 1'000'000;
    TxKind kind = TxKind::Local;

    Digest digest() const;
};

// SyncMirror transactions carry their write set as (key, value) word pairs.
Transaction make_mirror_tx(Address target, std::span<const std::pair<Word, Word>> writes,
                           std::uint64_t nonce);

struct CallResult {
    bool ok = false;
    std::string error;                     // empty on success
    std::vector<Word> return_data;
    FeeUnits cost = 0;
    std::vector<std::pair<Word, Word>> writes;

    static CallResult failed(std::string why, FeeUnits cost = 0) {
        CallResult r;
        r.error = std::move(why);
        r.cost = cost;
        return r;
    }
};

struct Receipt {
    Digest tx_digest;
    Address target;
    TxKind kind = TxKind::Local;
    bool ok = false;
    std::string error;
    std::vector<Word> return_data;
    std::vector<std::pair<Word, Word>> writes;
    FeeUnits cost = 0;
};

struct Block {
    std::uint64_t height = 0;
    Digest parent_digest;
    std::vector<Transaction> transactions;
    Digest state_digest;
    Tick timestamp = 0;

    Digest digest() const;
};

// Lets the simulation intercept transactions aimed at system addresses (the
// router) during block execution; returns nullopt to fall through to the
// ordinary contract dispatch.
class TxInterceptor {
public:
    virtual ~TxInterceptor() = default;
    virtual std::optional<CallResult> intercept(const Transaction& tx, Tick now) = 0;
};

class ChainState {
public:
    ChainState(ChainId id, FeeSchedule fees) : id_(id), fees_(fees) {}

    const ChainId& id() const { return id_; }
    const FeeSchedule& fees() const { return fees_; }
    std::uint64_t height() const { return height_; }
    Digest tip_digest() const { return tip_digest_; }

    void register_contract(ContractAccount account);  // throws DuplicateAddress

    // Direct execution against S_main. Unknown address/selector come back as
    // status=false with empty return data rather than throwing.
    CallResult call_function(const Address& target, const Selector& selector,
                             std::span<const Word> params);

    Block mine_block(std::vector<Transaction> txs, Tick now, TxInterceptor* interceptor = nullptr);

    Digest state_digest() const;  // canonical digest over all contract storage

    const ContractAccount* find_contract(const Address& a) const;
    Word storage_at(const Address& a, const Word& key) const;
    std::uint64_t next_nonce(const Address& sender) const;

    const std::vector<Receipt>& receipts() const { return receipts_; }
    const std::vector<Receipt>& receipts_at(std::uint64_t height) const;
    const std::vector<Block>& blocks() const { return blocks_; }

private:
    CallResult execute(const Transaction& tx);

    ChainId id_;
    FeeSchedule fees_;
    std::map<Address, ContractAccount> contracts_;
    std::map<Address, std::uint64_t> nonces_;
    std::uint64_t height_ = 0;
    Digest tip_digest_;
    std::vector<Block> blocks_;
    std::vector<Receipt> receipts_;
    std::vector<std::vector<Receipt>> receipts_by_block_;  // index = height - 1
};

}  // namespace crosslink
