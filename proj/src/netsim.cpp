#include "crosslink/netsim.hpp"

#include <limits>

#include "crosslink/encoding.hpp"

namespace crosslink {

std::uint64_t subseed(std::uint64_t master, std::string_view label) {
    Encoder e;
    e.str(label).u64(master);
    Digest d = e.digest();
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | d.bytes[i];
    return v;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) return 0;
    // rejection sampling to kill modulo bias; the loop terminates fast since
    // the reject zone is < n
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
    if (hi <= lo) return lo;
    return lo + below(hi - lo + 1);
}

bool Rng::chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    // compare against a 53-bit uniform fraction; fully determined by the
    // engine stream
    constexpr double kScale = 9007199254740992.0;  // 2^53
    double u = static_cast<double>(engine_() >> 11) / kScale;
    return u < p;
}

void EnodeRegistry::register_enode(const EnodeRecord& record) {
    auto it = records_.find(record.chain);
    if (it != records_.end() && it->second.endpoint != record.endpoint)
        replacements_.push_back("0x" + record.chain.hex_tail(4) + " " + it->second.endpoint +
                                " -> " + record.endpoint);
    records_[record.chain] = record;
}

std::optional<EnodeRecord> EnodeRegistry::resolve(const ChainId& chain) const {
    auto it = records_.find(chain);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void EventQueue::push(Tick tick, SimPayload payload) {
    heap_.push(SimEvent{tick, next_sequence_++, std::move(payload)});
}

std::optional<SimEvent> EventQueue::pop() {
    if (heap_.empty()) return std::nullopt;
    SimEvent ev = heap_.top();
    heap_.pop();
    return ev;
}

}  // namespace crosslink
