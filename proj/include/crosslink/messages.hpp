#pragma once

#include <variant>
#include <vector>

#include "crosslink/encoding.hpp"
#include "crosslink/types.hpp"

namespace crosslink {

struct ExternalContract {
    Address contract_address;
    Selector function_selector;
    std::vector<Word> params;

    bool operator==(const ExternalContract&) const = default;
};

struct Callback {
    ChainId chain;                 // zero chain + zero address = fire-and-forget
    Address callback_address;
    Selector callback_selector;

    bool is_null() const { return callback_address.is_zero(); }
    bool operator==(const Callback&) const = default;
};

struct CrossChainCall {
    RequestId request_id;
    Address sender;
    ExternalContract target;
    Callback callback;

    std::vector<std::uint8_t> canonical_bytes() const;
    Digest digest() const;

    static CrossChainCall decode(std::span<const std::uint8_t> data);  // throws on malformed input

    bool operator==(const CrossChainCall&) const = default;
};

struct CrossChainRequestEvent {
    ChainId target_chain;
    CrossChainCall call;
};

struct CallBackResultEvent {
    RequestId request_id;
    bool status = false;
    std::vector<Word> result;
};

using RouterEvent = std::variant<CrossChainRequestEvent, CallBackResultEvent>;

}  // namespace crosslink
