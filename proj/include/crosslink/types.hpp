#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crosslink {

using Tick = std::uint64_t;
using FeeUnits = std::uint64_t;

template <std::size_t N>
struct FixedBytes {
    std::array<std::uint8_t, N> bytes{};

    constexpr auto operator<=>(const FixedBytes&) const = default;

    constexpr bool is_zero() const {
        for (auto b : bytes)
            if (b != 0) return false;
        return true;
    }

    std::string hex() const;
    std::string hex_prefix(std::size_t n_bytes) const;
    std::string hex_tail(std::size_t n_bytes) const;  // low-order bytes; ids read naturally

    // Accepts optional 0x prefix and shorter strings, which are left-padded
    // with zero bytes (so "0x2a" is the word 42).
    static FixedBytes from_hex(std::string_view s);
    static FixedBytes from_u64(std::uint64_t v);  // big-endian into the tail

    std::uint64_t to_u64() const;  // big-endian tail; throws if high bytes set
};

using Word = FixedBytes<32>;
using Digest = FixedBytes<32>;
using ChainId = FixedBytes<32>;
using RequestId = FixedBytes<32>;
using Address = FixedBytes<20>;
using Selector = FixedBytes<4>;

inline Word bool_word(bool b) { return Word::from_u64(b ? 1 : 0); }

// Addresses reserved for system machinery; genesis contracts may not use them.
Address router_address();
Address system_sender();
bool is_reserved_address(const Address& a);

// ---- implementation ----

namespace detail {
int hex_nibble(char c);
}

template <std::size_t N>
std::string FixedBytes<N>::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * N);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

template <std::size_t N>
std::string FixedBytes<N>::hex_prefix(std::size_t n_bytes) const {
    return hex().substr(0, 2 * std::min(n_bytes, N));
}

template <std::size_t N>
std::string FixedBytes<N>::hex_tail(std::size_t n_bytes) const {
    std::string h = hex();
    return h.substr(h.size() - 2 * std::min(n_bytes, N));
}

template <std::size_t N>
FixedBytes<N> FixedBytes<N>::from_hex(std::string_view s) {
    if (s.starts_with("0x") || s.starts_with("0X")) s.remove_prefix(2);
    if (s.size() > 2 * N) throw std::invalid_argument("hex string too long for " + std::to_string(N) + " bytes");
    FixedBytes out;
    // parse right-aligned so short strings mean low-order bytes
    std::size_t bi = N;
    std::size_t i = s.size();
    while (i > 0) {
        int lo = detail::hex_nibble(s[--i]);
        int hi = i > 0 ? detail::hex_nibble(s[--i]) : 0;
        out.bytes[--bi] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

template <std::size_t N>
FixedBytes<N> FixedBytes<N>::from_u64(std::uint64_t v) {
    static_assert(N >= 8);
    FixedBytes out;
    for (std::size_t i = 0; i < 8; ++i)
        out.bytes[N - 1 - i] = static_cast<std::uint8_t>(v >> (8 * i));
    return out;
}

template <std::size_t N>
std::uint64_t FixedBytes<N>::to_u64() const {
    static_assert(N >= 8);
    for (std::size_t i = 0; i + 8 < N; ++i)
        if (bytes[i] != 0) throw std::overflow_error("value does not fit in u64");
    std::uint64_t v = 0;
    for (std::size_t i = N - 8; i < N; ++i) v = (v << 8) | bytes[i];
    return v;
}

}  // namespace crosslink
