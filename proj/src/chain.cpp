#include "crosslink/chain.hpp"

namespace crosslink {

Digest Transaction::digest() const {
    Encoder e;
    e.u8(static_cast<std::uint8_t>(kind)).fixed(sender).fixed(target).fixed(selector);
    e.words(params).u64(nonce).u64(gas_limit);
    return e.digest();
}

Transaction make_mirror_tx(Address target, std::span<const std::pair<Word, Word>> writes,
                           std::uint64_t nonce) {
    Transaction tx;
    tx.sender = system_sender();
    tx.target = target;
    tx.selector = Selector{};  // mirrors bypass function dispatch
    tx.params.reserve(writes.size() * 2);
    for (const auto& [k, v] : writes) {
        tx.params.push_back(k);
        tx.params.push_back(v);
    }
    tx.nonce = nonce;
    tx.kind = TxKind::SyncMirror;
    return tx;
}

Digest Block::digest() const {
    Encoder e;
    e.u64(height).fixed(parent_digest);
    e.u32(static_cast<std::uint32_t>(transactions.size()));
    for (const auto& tx : transactions) e.fixed(tx.digest());
    e.fixed(state_digest).u64(timestamp);
    return e.digest();
}

void ChainState::register_contract(ContractAccount account) {
    if (contracts_.contains(account.address))
        throw DuplicateAddress("contract already registered at 0x" + account.address.hex());
    if (is_reserved_address(account.address))
        throw DuplicateAddress("address 0x" + account.address.hex() + " is reserved");
    contracts_.emplace(account.address, std::move(account));
}

const ContractAccount* ChainState::find_contract(const Address& a) const {
    auto it = contracts_.find(a);
    return it == contracts_.end() ? nullptr : &it->second;
}

Word ChainState::storage_at(const Address& a, const Word& key) const {
    const ContractAccount* c = find_contract(a);
    if (!c) return Word{};
    auto it = c->storage.find(key);
    return it == c->storage.end() ? Word{} : it->second;
}

std::uint64_t ChainState::next_nonce(const Address& sender) const {
    auto it = nonces_.find(sender);
    return it == nonces_.end() ? 0 : it->second;
}

CallResult ChainState::call_function(const Address& target, const Selector& selector,
                                     std::span<const Word> params) {
    auto it = contracts_.find(target);
    if (it == contracts_.end()) return CallResult::failed("UnknownAddress");

    auto fit = it->second.functions.find(selector);
    if (fit == it->second.functions.end()) return CallResult::failed("UnknownSelector");

    const FunctionShape& fn = fit->second;
    CallResult res;
    switch (fn.kind) {
        case FunctionKind::ReadSlot: {
            Word value{};
            auto sit = it->second.storage.find(fn.slot);
            if (sit != it->second.storage.end()) value = sit->second;
            res.ok = true;
            res.return_data = {value};
            res.cost = fees_.exec_cost(0);
            break;
        }
        case FunctionKind::WriteSlot:
        case FunctionKind::StoreParam: {
            if (params.empty()) return CallResult::failed("MissingParam");
            it->second.storage[fn.slot] = params[0];
            res.ok = true;
            if (fn.kind == FunctionKind::WriteSlot) res.return_data = {bool_word(true)};
            res.cost = fees_.exec_cost(1);
            res.writes.emplace_back(fn.slot, params[0]);
            break;
        }
    }
    return res;
}

CallResult ChainState::execute(const Transaction& tx) {
    if (tx.kind == TxKind::SyncMirror) {
        if (tx.sender != system_sender())
            return CallResult::failed("MirrorSenderForbidden");
        if (tx.params.size() % 2 != 0)
            return CallResult::failed("MalformedMirror");
        auto it = contracts_.find(tx.target);
        if (it == contracts_.end()) return CallResult::failed("UnknownAddress");
        FeeUnits cost = fees_.per_write * static_cast<FeeUnits>(tx.params.size() / 2);
        if (cost > tx.gas_limit) return CallResult::failed("OutOfGas", cost);
        CallResult res;
        res.ok = true;
        for (std::size_t i = 0; i + 1 < tx.params.size(); i += 2) {
            it->second.storage[tx.params[i]] = tx.params[i + 1];
            res.writes.emplace_back(tx.params[i], tx.params[i + 1]);
        }
        res.cost = cost;
        return res;
    }
    if (tx.kind == TxKind::CrossChainInbound) {
        // Cross-chain executions belong on the compact chain; the main chain
        // refuses them outright so S_main stays out of reach (Access(X) must
        // stay inside S_compact).
        return CallResult::failed("CrossChainInboundOnMain");
    }

    // Costs are a pure function of the registered shape, so price the call
    // before any storage mutation.
    if (const ContractAccount* c = find_contract(tx.target)) {
        auto fit = c->functions.find(tx.selector);
        if (fit != c->functions.end()) {
            FeeUnits cost = fees_.exec_cost(fit->second.declared_writes());
            if (cost > tx.gas_limit) return CallResult::failed("OutOfGas", cost);
        }
    }
    return call_function(tx.target, tx.selector, tx.params);
}

Block ChainState::mine_block(std::vector<Transaction> txs, Tick now, TxInterceptor* interceptor) {
    std::vector<Receipt> block_receipts;
    block_receipts.reserve(txs.size());

    for (const Transaction& tx : txs) {
        Receipt r;
        r.tx_digest = tx.digest();
        r.target = tx.target;
        r.kind = tx.kind;

        if (tx.gas_limit == 0) {
            r.error = "BadGasLimit";
        } else if (tx.nonce != next_nonce(tx.sender)) {
            r.error = "InvalidNonce";
        } else {
            nonces_[tx.sender] = tx.nonce + 1;
            std::optional<CallResult> res;
            if (interceptor) res = interceptor->intercept(tx, now);
            if (!res) res = execute(tx);
            r.ok = res->ok;
            r.error = res->error;
            r.return_data = std::move(res->return_data);
            r.writes = std::move(res->writes);
            r.cost = res->cost;
        }
        block_receipts.push_back(std::move(r));
    }

    Block b;
    b.height = ++height_;
    b.parent_digest = tip_digest_;
    b.transactions = std::move(txs);
    b.state_digest = state_digest();
    b.timestamp = now;
    tip_digest_ = b.digest();

    receipts_.insert(receipts_.end(), block_receipts.begin(), block_receipts.end());
    receipts_by_block_.push_back(std::move(block_receipts));
    blocks_.push_back(b);
    return b;
}

const std::vector<Receipt>& ChainState::receipts_at(std::uint64_t height) const {
    if (height == 0 || height > receipts_by_block_.size())
        throw std::out_of_range("no receipts at height " + std::to_string(height));
    return receipts_by_block_[height - 1];
}

Digest ChainState::state_digest() const {
    Encoder e;
    e.fixed(id_);
    e.u32(static_cast<std::uint32_t>(contracts_.size()));
    for (const auto& [addr, account] : contracts_) {
        e.fixed(addr);
        e.u32(static_cast<std::uint32_t>(account.storage.size()));
        for (const auto& [k, v] : account.storage) e.fixed(k).fixed(v);
    }
    return e.digest();
}

}  // namespace crosslink
