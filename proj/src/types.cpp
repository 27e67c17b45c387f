#include "crosslink/types.hpp"

namespace crosslink {

namespace detail {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument(std::string("bad hex digit: ") + c);
}

}  // namespace detail

Address router_address() {
    Address a;
    a.bytes.fill(0xff);
    a.bytes[19] = 0x01;
    return a;
}

Address system_sender() {
    Address a;
    a.bytes.fill(0xff);
    a.bytes[19] = 0x02;
    return a;
}

bool is_reserved_address(const Address& a) {
    return a == router_address() || a == system_sender();
}

}  // namespace crosslink
