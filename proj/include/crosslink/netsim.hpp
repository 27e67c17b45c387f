#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "crosslink/keccak.hpp"
#include "crosslink/messages.hpp"
#include "crosslink/types.hpp"

namespace crosslink {

// ---- deterministic randomness ----------------------------------------------

// All randomness in a run derives from one master seed through
// domain-separated labels, so a single number reproduces everything.
std::uint64_t subseed(std::uint64_t master, std::string_view label);

// mt19937_64 has a standard-specified output sequence; the bounded mapping
// below is ours, so draws are reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    std::uint64_t below(std::uint64_t n);                       // uniform in [0, n)
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi);  // inclusive bounds
    bool chance(double p);                                      // true with probability p

private:
    std::mt19937_64 engine_;
};

// ---- enode locator ----------------------------------------------------------

struct EnodeRecord {
    ChainId chain;
    std::string endpoint;
    bool is_public = true;
};

class EnodeRegistry {
public:
    // Idempotent; re-registering a chain replaces the endpoint (latest wins)
    // and the replacement is logged.
    void register_enode(const EnodeRecord& record);

    // Returns the endpoint, or nullopt (UnknownChain) if never registered.
    std::optional<EnodeRecord> resolve(const ChainId& chain) const;

    const std::vector<std::string>& replacements() const { return replacements_; }

private:
    std::map<ChainId, EnodeRecord> records_;
    std::vector<std::string> replacements_;
};

// ---- transport ---------------------------------------------------------------

struct TransportConfig {
    Tick latency_min = 1;
    Tick latency_max = 1;
    double drop_probability = 0.0;  // must stay < 1 for liveness
};

struct Envelope {
    ChainId from_chain;
    ChainId to_chain;
    std::vector<std::uint8_t> payload;  // canonical-encoded CrossChainCall
    Tick enqueue_tick = 0;
    Tick deliver_tick = 0;

    Digest payload_digest() const { return keccak256(payload); }
};

// ---- event queue -------------------------------------------------------------

struct BlockProductionEvent {
    ChainId chain;
};

struct DeliveryEvent {
    Envelope envelope;
};

// Scenario actions are opaque to the queue; the world interprets the id.
struct ScenarioActionEvent {
    std::uint64_t action_id = 0;
};

using SimPayload = std::variant<BlockProductionEvent, DeliveryEvent, ScenarioActionEvent>;

struct SimEvent {
    Tick tick = 0;
    std::uint64_t sequence = 0;  // insertion order; tie-break within a tick
    SimPayload payload;
};

// Deterministic discrete-event queue: pops strictly by (tick, sequence).
class EventQueue {
public:
    void push(Tick tick, SimPayload payload);
    std::optional<SimEvent> pop();  // nullopt when quiescent
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            return a.tick != b.tick ? a.tick > b.tick : a.sequence > b.sequence;
        }
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::uint64_t next_sequence_ = 0;
};

}  // namespace crosslink
