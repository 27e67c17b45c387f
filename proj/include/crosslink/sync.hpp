#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "crosslink/chain.hpp"
#include "crosslink/compact.hpp"

namespace crosslink {

struct SyncMismatch {
    Address contract;
    Word key;
    Word main_value;
    Word compact_value;
};

struct SyncReport {
    std::size_t checked_keys = 0;
    std::vector<SyncMismatch> mismatches;
    std::uint64_t main_height = 0;
    std::uint64_t compact_height = 0;

    bool clean() const { return mismatches.empty(); }
};

struct ConflictRecord {
    Tick tick = 0;
    ChainId chain;
    Address contract;
    Word key;
    std::string winner;  // "mirror" under the last-writer rule

    std::string csv_line() const;
};

// Keeps one main chain and its compact chain consistent in both directions.
class Synchronizer {
public:
    explicit Synchronizer(ChainId chain) : chain_(chain) {}

    // Mirrors an authorized-key write set of a committed main block into a
    // MainSync compact block and applies it. Keys whose latest writer in the
    // block is a local transaction but that also have an in-flight mirror
    // pending lose to the mirror (last-writer by event order) and are logged.
    CompactBlock on_main_block(const Block& block, const std::vector<Receipt>& receipts,
                               const ExposurePolicy& policy, CompactChain& compact,
                               const std::set<KeyRef>& in_flight_mirror_keys, Tick now);

    // Builds the SyncMirror transaction replaying a compact execution's write
    // set into S_main. Read-only executions produce none.
    static std::optional<Transaction> on_compact_exec(const CompactExecResult& exec,
                                                      std::uint64_t mirror_nonce);

    static SyncReport verify_consistency(const ChainState& main, const CompactChain& compact,
                                         const ExposurePolicy& policy);

    const std::vector<ConflictRecord>& conflicts() const { return conflicts_; }
    std::uint64_t next_main_height() const { return next_main_height_; }

private:
    ChainId chain_;
    std::uint64_t next_main_height_ = 1;
    std::vector<ConflictRecord> conflicts_;
};

}  // namespace crosslink
