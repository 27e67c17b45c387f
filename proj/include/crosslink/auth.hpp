#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crosslink/errors.hpp"
#include "crosslink/fees.hpp"
#include "crosslink/types.hpp"

namespace crosslink {

// ---- XChain mempool -------------------------------------------------------

enum class EntryStatus : std::uint8_t { Pending, Finalized, Rejected };

struct XChainMempoolEntry {
    Digest tx_digest;
    RequestId request_id;
    std::uint64_t inclusion_height = 0;
    bool via_compact = false;
    EntryStatus status = EntryStatus::Pending;
};

// Dedicated cross-chain transaction pool, separate from any local mempool.
// Entries validated on the compact chain bypass the depth rule and finalize
// immediately; everyone else waits for six blocks of depth.
class XChainMempool {
public:
    static constexpr std::uint64_t kFinalityDepth = 6;

    XChainMempoolEntry& submit(const Digest& tx_digest, const RequestId& request,
                               std::uint64_t current_height, bool via_compact);
    void mark_via_compact(const Digest& tx_digest);
    void mark_rejected(const Digest& tx_digest);

    // Flips every eligible Pending entry to Finalized and returns them.
    std::vector<XChainMempoolEntry> finalize_ready(std::uint64_t current_height);

    const XChainMempoolEntry* find(const Digest& tx_digest) const;
    const std::map<Digest, XChainMempoolEntry>& entries() const { return entries_; }

private:
    std::map<Digest, XChainMempoolEntry> entries_;
};

// ---- Collateral ledger ----------------------------------------------------

struct UserRef {
    ChainId chain;
    Address address;
    auto operator<=>(const UserRef&) const = default;
};

struct PairRef {
    ChainId owner;  // the chain that funded the account
    ChainId host;   // the chain it lives on
    auto operator<=>(const PairRef&) const = default;
};

struct FeeLock {
    UserRef owner;
    FeeUnits amount = 0;
};

struct SettleOutcome {
    enum class Kind : std::uint8_t { Executed, Failed } kind = Kind::Failed;
    FeeUnits actual_cost = 0;
};

struct AdmissionResult {
    bool accepted = false;
    FeeUnits required = 0;
    FeeUnits locked = 0;
};

struct LedgerSnapshot {
    std::vector<std::pair<UserRef, FeeUnits>> balances;
    std::vector<std::pair<PairRef, FeeUnits>> collateral;
    std::vector<std::pair<RequestId, FeeUnits>> locks;
    FeeUnits destination_gas_consumed = 0;
    FeeUnits base_fees_burned = 0;
    FeeUnits collateral_shortfall = 0;
};

// Balances, per-request fee locks, and chain-pair collateral accounts. All
// mutations keep total fee units constant: every debit lands in another
// balance, a lock, or one of the consumed-cost sinks.
class CollateralLedger {
public:
    void fund_user(const UserRef& user, FeeUnits amount);
    void fund_collateral(const PairRef& pair, FeeUnits amount);

    FeeUnits balance(const UserRef& user) const;
    FeeUnits collateral(const PairRef& pair) const;
    bool has_lock(const RequestId& request) const { return locks_.contains(request); }
    FeeUnits locked_amount(const RequestId& request) const;

    // Moves fee_fn(estimated_cd) from the sender's balance into a lock.
    // Returns the locked amount, or nullopt (InsufficientFunds) with no state
    // change when the balance cannot cover it.
    std::optional<FeeUnits> lock_fee(const UserRef& sender, const RequestId& request,
                                     FeeUnits estimated_cd, const FeeSchedule& schedule);

    // Executed: actual cost leaves the (source-owned, destination-hosted)
    // collateral for the gas sink, the consumed part of the lock flows to the
    // destination-owned revenue account on the source chain, and the surplus
    // returns to the sender. Failed: the lock returns minus a burned f_base.
    void settle_or_refund(const RequestId& request, const SettleOutcome& outcome,
                          const ChainId& source, const ChainId& destination,
                          const FeeSchedule& schedule);

    AdmissionResult admission_check(const UserRef& sender, const RequestId& request,
                                    FeeUnits estimated_cd, const FeeSchedule& schedule);

    LedgerSnapshot snapshot() const;

private:
    std::map<UserRef, FeeUnits> balances_;
    std::map<PairRef, FeeUnits> collateral_;
    std::map<RequestId, FeeLock> locks_;
    std::set<RequestId> settled_;
    FeeUnits destination_gas_consumed_ = 0;
    FeeUnits base_fees_burned_ = 0;
    FeeUnits collateral_shortfall_ = 0;
};

// ---- DoS experiment -------------------------------------------------------

struct DoSExperimentConfig {
    FeeUnits attacker_capital = 0;                 // A
    std::vector<FeeUnits> per_invocation_costs;    // c_i; cycled if shorter than the flood
    FeeUnits comp_max = 0;                         // computational capacity per window
    Tick window = 1;

    FeeUnits cost_at(std::size_t i) const {
        return per_invocation_costs.empty() ? 0
                                            : per_invocation_costs[i % per_invocation_costs.size()];
    }
};

}  // namespace crosslink
