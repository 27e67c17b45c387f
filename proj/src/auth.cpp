#include "crosslink/auth.hpp"

namespace crosslink {

XChainMempoolEntry& XChainMempool::submit(const Digest& tx_digest, const RequestId& request,
                                          std::uint64_t current_height, bool via_compact) {
    XChainMempoolEntry entry;
    entry.tx_digest = tx_digest;
    entry.request_id = request;
    entry.inclusion_height = current_height;
    entry.via_compact = via_compact;
    entry.status = EntryStatus::Pending;
    return entries_.insert_or_assign(tx_digest, entry).first->second;
}

void XChainMempool::mark_via_compact(const Digest& tx_digest) {
    auto it = entries_.find(tx_digest);
    if (it != entries_.end()) it->second.via_compact = true;
}

void XChainMempool::mark_rejected(const Digest& tx_digest) {
    auto it = entries_.find(tx_digest);
    if (it != entries_.end()) it->second.status = EntryStatus::Rejected;
}

std::vector<XChainMempoolEntry> XChainMempool::finalize_ready(std::uint64_t current_height) {
    std::vector<XChainMempoolEntry> out;
    for (auto& [digest, entry] : entries_) {
        if (entry.status != EntryStatus::Pending) continue;
        bool deep_enough = current_height >= entry.inclusion_height + kFinalityDepth;
        if (entry.via_compact || deep_enough) {
            entry.status = EntryStatus::Finalized;
            out.push_back(entry);
        }
    }
    return out;
}

const XChainMempoolEntry* XChainMempool::find(const Digest& tx_digest) const {
    auto it = entries_.find(tx_digest);
    return it == entries_.end() ? nullptr : &it->second;
}

void CollateralLedger::fund_user(const UserRef& user, FeeUnits amount) {
    balances_[user] += amount;
}

void CollateralLedger::fund_collateral(const PairRef& pair, FeeUnits amount) {
    collateral_[pair] += amount;
}

FeeUnits CollateralLedger::balance(const UserRef& user) const {
    auto it = balances_.find(user);
    return it == balances_.end() ? 0 : it->second;
}

FeeUnits CollateralLedger::collateral(const PairRef& pair) const {
    auto it = collateral_.find(pair);
    return it == collateral_.end() ? 0 : it->second;
}

FeeUnits CollateralLedger::locked_amount(const RequestId& request) const {
    auto it = locks_.find(request);
    return it == locks_.end() ? 0 : it->second.amount;
}

std::optional<FeeUnits> CollateralLedger::lock_fee(const UserRef& sender, const RequestId& request,
                                                   FeeUnits estimated_cd,
                                                   const FeeSchedule& schedule) {
    if (locks_.contains(request)) throw DoubleSettle("request already holds a lock");
    FeeUnits fee = schedule.fee_for(estimated_cd);
    auto it = balances_.find(sender);
    if (it == balances_.end() || it->second < fee) return std::nullopt;
    it->second -= fee;
    locks_.emplace(request, FeeLock{sender, fee});
    return fee;
}

void CollateralLedger::settle_or_refund(const RequestId& request, const SettleOutcome& outcome,
                                        const ChainId& source, const ChainId& destination,
                                        const FeeSchedule& schedule) {
    auto it = locks_.find(request);
    if (it == locks_.end()) {
        if (settled_.contains(request)) throw DoubleSettle("request already settled");
        throw UnknownRequest("no live lock for request");
    }
    FeeLock lock = it->second;
    locks_.erase(it);
    settled_.insert(request);

    if (outcome.kind == SettleOutcome::Kind::Executed) {
        FeeUnits cost = outcome.actual_cost;

        // Destination-side gas, paid by the source chain's collateral account
        // hosted on the destination.
        FeeUnits& pool = collateral_[{source, destination}];
        FeeUnits paid = cost < pool ? cost : pool;
        pool -= paid;
        destination_gas_consumed_ += paid;
        collateral_shortfall_ += cost - paid;

        // Source-side: the consumed part of the lock reimburses the channel
        // via the destination-owned account on the source chain; the surplus
        // returns to the sender.
        FeeUnits consumed = cost < lock.amount ? cost : lock.amount;
        collateral_[{destination, source}] += consumed;
        balances_[lock.owner] += lock.amount - consumed;
    } else {
        FeeUnits burned = schedule.f_base < lock.amount ? schedule.f_base : lock.amount;
        base_fees_burned_ += burned;
        balances_[lock.owner] += lock.amount - burned;
    }
}

AdmissionResult CollateralLedger::admission_check(const UserRef& sender, const RequestId& request,
                                                  FeeUnits estimated_cd,
                                                  const FeeSchedule& schedule) {
    AdmissionResult res;
    res.required = schedule.fee_for(estimated_cd);
    auto locked = lock_fee(sender, request, estimated_cd, schedule);
    res.accepted = locked.has_value();
    res.locked = locked.value_or(0);
    return res;
}

LedgerSnapshot CollateralLedger::snapshot() const {
    LedgerSnapshot s;
    for (const auto& [user, amount] : balances_) s.balances.emplace_back(user, amount);
    for (const auto& [pair, amount] : collateral_) s.collateral.emplace_back(pair, amount);
    for (const auto& [request, lock] : locks_) s.locks.emplace_back(request, lock.amount);
    s.destination_gas_consumed = destination_gas_consumed_;
    s.base_fees_burned = base_fees_burned_;
    s.collateral_shortfall = collateral_shortfall_;
    return s;
}

}  // namespace crosslink
