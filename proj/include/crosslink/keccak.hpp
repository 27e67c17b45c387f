#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "crosslink/types.hpp"

namespace crosslink {

// Keccak-256 with the original 0x01 domain padding (the variant Ethereum
// uses), not the FIPS-202 SHA3-256 0x06 padding.
Digest keccak256(std::span<const std::uint8_t> data);
Digest keccak256(std::string_view data);

// First four bytes of keccak256 of the canonical signature string,
// e.g. "getValue()" -> 20965255.
Selector selector_of(std::string_view signature);

}  // namespace crosslink
