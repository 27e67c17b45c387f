#include "crosslink/sync.hpp"

#include <map>

namespace crosslink {

std::string ConflictRecord::csv_line() const {
    return std::to_string(tick) + "," + chain.hex_tail(4) + ",0x" + contract.hex() + ",0x" +
           key.hex() + "," + winner;
}

CompactBlock Synchronizer::on_main_block(const Block& block, const std::vector<Receipt>& receipts,
                                         const ExposurePolicy& policy, CompactChain& compact,
                                         const std::set<KeyRef>& in_flight_mirror_keys, Tick now) {
    if (block.height != next_main_height_)
        throw HeightGap("mirroring main height " + std::to_string(block.height) +
                        " but next expected is " + std::to_string(next_main_height_));
    next_main_height_ = block.height + 1;

    // Final writer per key within the block decides whether the local value
    // may propagate; an in-flight mirror always wins over a local write.
    std::map<KeyRef, TxKind> final_writer;
    for (const Receipt& r : receipts) {
        if (!r.ok) continue;
        for (const auto& [key, value] : r.writes)
            if (policy.key_authorized(r.target, key)) final_writer[{r.target, key}] = r.kind;
    }

    std::vector<CompactEntry> entries;
    for (const Receipt& r : receipts) {
        if (!r.ok) continue;
        CompactEntry entry{r.tx_digest, {}};
        for (const auto& [key, value] : r.writes) {
            if (!policy.key_authorized(r.target, key)) continue;
            KeyRef ref{r.target, key};
            if (r.kind != TxKind::SyncMirror) {
                if (final_writer[ref] == TxKind::SyncMirror) {
                    // the same block carries a mirror for this key; ordering
                    // already makes the mirror win, record the collision
                    conflicts_.push_back({now, chain_, r.target, key, "mirror"});
                } else if (in_flight_mirror_keys.contains(ref)) {
                    // a mirror landing in a later block holds the newer value;
                    // do not push the stale local write into S_compact
                    conflicts_.push_back({now, chain_, r.target, key, "mirror"});
                    continue;
                }
            }
            entry.writes.emplace_back(ref, value);
        }
        if (!entry.writes.empty()) entries.push_back(std::move(entry));
    }

    return compact.commit_main_sync(std::move(entries));
}

std::optional<Transaction> Synchronizer::on_compact_exec(const CompactExecResult& exec,
                                                         std::uint64_t mirror_nonce) {
    if (!exec.ok || exec.writes.empty()) return std::nullopt;

    // A single execution writes through exactly one contract; a mirror tx has
    // one target address, so anything else is a broken write set.
    std::vector<std::pair<Word, Word>> writes;
    Address target = exec.writes.front().first.contract;
    for (const auto& [ref, value] : exec.writes) {
        if (!(ref.contract == target))
            throw SimInvariantViolation("compact execution wrote to multiple contracts");
        writes.emplace_back(ref.key, value);
    }
    return make_mirror_tx(target, writes, mirror_nonce);
}

SyncReport Synchronizer::verify_consistency(const ChainState& main, const CompactChain& compact,
                                            const ExposurePolicy& policy) {
    SyncReport report;
    report.main_height = main.height();
    report.compact_height = compact.height();
    for (const auto& [contract, key] : policy.authorized_keys()) {
        ++report.checked_keys;
        Word main_value = main.storage_at(contract, key);
        Word compact_value = compact.at({contract, key});
        if (!(main_value == compact_value))
            report.mismatches.push_back({contract, key, main_value, compact_value});
    }
    return report;
}

}  // namespace crosslink
