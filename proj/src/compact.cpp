#include "crosslink/compact.hpp"

namespace crosslink {

const ExposureEntry* ExposurePolicy::find(const Address& contract, const Selector& selector) const {
    for (const auto& e : entries)
        if (e.contract == contract && e.selector == selector) return &e;
    return nullptr;
}

bool ExposurePolicy::key_authorized(const Address& contract, const Word& key) const {
    for (const auto& e : entries)
        if (e.contract == contract && e.storage_keys.contains(key)) return true;
    return false;
}

std::set<std::pair<Address, Word>> ExposurePolicy::authorized_keys() const {
    std::set<std::pair<Address, Word>> out;
    for (const auto& e : entries)
        for (const Word& k : e.storage_keys) out.emplace(e.contract, k);
    return out;
}

Digest CompactBlock::digest() const {
    Encoder e;
    e.u64(height).fixed(parent_digest).u8(static_cast<std::uint8_t>(origin));
    e.u32(static_cast<std::uint32_t>(entries.size()));
    for (const auto& entry : entries) {
        e.fixed(entry.source_tx);
        e.u32(static_cast<std::uint32_t>(entry.writes.size()));
        for (const auto& [ref, value] : entry.writes)
            e.fixed(ref.contract).fixed(ref.key).fixed(value);
    }
    return e.digest();
}

void CompactChain::authorize(const ExposurePolicy& policy, const ChainState& main) {
    for (const auto& entry : policy.entries) {
        const ContractAccount* account = main.find_contract(entry.contract);
        if (!account)
            throw UnknownContract("exposure references unregistered contract 0x" +
                                  entry.contract.hex());
        auto fit = account->functions.find(entry.selector);
        if (fit != account->functions.end())
            shapes_[{entry.contract, entry.selector}] = fit->second;
        for (const Word& key : entry.storage_keys)
            s_compact_[{entry.contract, key}] = main.storage_at(entry.contract, key);
    }
}

CompactExecResult CompactChain::apply_cross_chain_tx(const ExposurePolicy& policy,
                                                     const CrossChainCall& call,
                                                     const FeeSchedule& fees) {
    CompactExecResult res;
    res.source_tx = call.digest();

    const Address& target = call.target.contract_address;
    const Selector& sel = call.target.function_selector;

    const ExposureEntry* entry = policy.find(target, sel);
    if (!entry) {
        res.error = "UnauthorizedTarget";
        return res;
    }
    auto sit = shapes_.find({target, sel});
    if (sit == shapes_.end()) {
        // exposed but never registered on main: treat as unauthorized
        res.error = "UnauthorizedTarget";
        return res;
    }
    const FunctionShape& fn = sit->second;

    switch (fn.kind) {
        case FunctionKind::ReadSlot: {
            KeyRef ref{target, fn.slot};
            if (!policy.key_authorized(target, fn.slot)) {
                res.error = "UnauthorizedKey";
                return res;
            }
            res.ok = true;
            res.return_data = {at(ref)};
            res.cost = fees.exec_cost(0);
            break;
        }
        case FunctionKind::WriteSlot:
        case FunctionKind::StoreParam: {
            if (entry->mode != ExposureMode::ReadWrite) {
                res.error = "WriteToReadOnly";
                return res;
            }
            if (!policy.key_authorized(target, fn.slot)) {
                res.error = "UnauthorizedKey";
                return res;
            }
            if (call.target.params.empty()) {
                res.error = "MissingParam";
                return res;
            }
            KeyRef ref{target, fn.slot};
            s_compact_[ref] = call.target.params[0];
            res.ok = true;
            if (fn.kind == FunctionKind::WriteSlot) res.return_data = {bool_word(true)};
            res.cost = fees.exec_cost(1);
            res.writes.emplace_back(ref, call.target.params[0]);
            break;
        }
    }

    CompactBlock sealed = seal({CompactEntry{res.source_tx, res.writes}}, CompactOrigin::CrossChainExec);
    res.sealed_height = sealed.height;
    return res;
}

CompactBlock CompactChain::commit_main_sync(std::vector<CompactEntry> entries) {
    for (const auto& entry : entries)
        for (const auto& [ref, value] : entry.writes) s_compact_[ref] = value;
    return seal(std::move(entries), CompactOrigin::MainSync);
}

CompactBlock CompactChain::seal(std::vector<CompactEntry> entries, CompactOrigin origin) {
    CompactBlock b;
    b.height = height_ + 1;
    b.parent_digest = tip_digest_;
    b.entries = std::move(entries);
    b.origin = origin;
    height_ = b.height;
    tip_digest_ = b.digest();
    blocks_.push_back(b);
    return b;
}

Word CompactChain::at(const KeyRef& ref) const {
    auto it = s_compact_.find(ref);
    return it == s_compact_.end() ? Word{} : it->second;
}

Digest CompactChain::state_digest() const {
    Encoder e;
    e.fixed(id_);
    e.u32(static_cast<std::uint32_t>(s_compact_.size()));
    for (const auto& [ref, value] : s_compact_)
        e.fixed(ref.contract).fixed(ref.key).fixed(value);
    return e.digest();
}

}  // namespace crosslink
