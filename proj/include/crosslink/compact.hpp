#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "crosslink/chain.hpp"
#include "crosslink/messages.hpp"

namespace crosslink {

enum class ExposureMode : std::uint8_t { ReadOnly, ReadWrite };

struct ExposureEntry {
    Address contract;
    Selector selector;
    std::set<Word> storage_keys;
    ExposureMode mode = ExposureMode::ReadOnly;
};

struct ExposurePolicy {
    std::vector<ExposureEntry> entries;

    const ExposureEntry* find(const Address& contract, const Selector& selector) const;
    bool key_authorized(const Address& contract, const Word& key) const;
    std::set<std::pair<Address, Word>> authorized_keys() const;
};

struct KeyRef {
    Address contract;
    Word key;
    auto operator<=>(const KeyRef&) const = default;
};

enum class CompactOrigin : std::uint8_t { MainSync, CrossChainExec };

struct CompactEntry {
    Digest source_tx;
    std::vector<std::pair<KeyRef, Word>> writes;
};

struct CompactBlock {
    std::uint64_t height = 0;
    Digest parent_digest;
    std::vector<CompactEntry> entries;
    CompactOrigin origin = CompactOrigin::MainSync;

    Digest digest() const;
};

struct CompactExecResult {
    bool ok = false;
    std::string error;
    std::vector<Word> return_data;
    FeeUnits cost = 0;
    std::vector<std::pair<KeyRef, Word>> writes;
    Digest source_tx;
    std::uint64_t sealed_height = 0;  // compact block that committed this execution
};

// The per-chain lightweight sidechain. It holds S_compact plus copies of the
// exposed function shapes; by construction it carries no handle to any
// ChainState, so a cross-chain execution has no path to S_main.
class CompactChain {
public:
    explicit CompactChain(ChainId id) : id_(id) {}

    const ChainId& id() const { return id_; }
    std::uint64_t height() const { return height_; }

    // Seeds S_compact from the main chain's current values of every
    // authorized key. Throws UnknownContract if the policy references a
    // contract absent from main.
    void authorize(const ExposurePolicy& policy, const ChainState& main);

    CompactExecResult apply_cross_chain_tx(const ExposurePolicy& policy, const CrossChainCall& call,
                                           const FeeSchedule& fees);

    // Applies a MainSync write set from the synchronizer and seals it as the
    // next compact block.
    CompactBlock commit_main_sync(std::vector<CompactEntry> entries);

    Word at(const KeyRef& ref) const;
    bool has_key(const KeyRef& ref) const { return s_compact_.contains(ref); }
    const std::map<KeyRef, Word>& s_compact() const { return s_compact_; }
    const std::vector<CompactBlock>& blocks() const { return blocks_; }

    Digest state_digest() const;

    // test hook: corrupt one word in place (fault injection)
    void poke(const KeyRef& ref, const Word& value) { s_compact_[ref] = value; }

    std::uint64_t seal_next_height() const { return height_ + 1; }

private:
    CompactBlock seal(std::vector<CompactEntry> entries, CompactOrigin origin);

    ChainId id_;
    std::map<KeyRef, Word> s_compact_;
    std::map<std::pair<Address, Selector>, FunctionShape> shapes_;
    std::uint64_t height_ = 0;
    Digest tip_digest_;
    std::vector<CompactBlock> blocks_;
};

}  // namespace crosslink
