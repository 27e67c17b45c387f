#include "crosslink/messages.hpp"

namespace crosslink {

std::vector<std::uint8_t> CrossChainCall::canonical_bytes() const {
    Encoder e;
    e.fixed(request_id).fixed(sender);
    e.fixed(target.contract_address).fixed(target.function_selector).words(target.params);
    e.fixed(callback.chain).fixed(callback.callback_address).fixed(callback.callback_selector);
    return e.bytes();
}

Digest CrossChainCall::digest() const {
    return keccak256(canonical_bytes());
}

CrossChainCall CrossChainCall::decode(std::span<const std::uint8_t> data) {
    Decoder d(data);
    CrossChainCall call;
    call.request_id = d.fixed<32>();
    call.sender = d.fixed<20>();
    call.target.contract_address = d.fixed<20>();
    call.target.function_selector = d.fixed<4>();
    call.target.params = d.words();
    call.callback.chain = d.fixed<32>();
    call.callback.callback_address = d.fixed<20>();
    call.callback.callback_selector = d.fixed<4>();
    if (!d.done()) throw std::runtime_error("trailing bytes in CrossChainCall");
    return call;
}

}  // namespace crosslink
