#include "crosslink/keccak.hpp"

#include <bit>
#include <cstring>

namespace crosslink {

namespace {

constexpr std::uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

constexpr unsigned kRotation[25] = {
    0,  1,  62, 28, 27,   // x=0..4, y=0
    36, 44, 6,  55, 20,   // y=1
    3,  10, 43, 25, 39,   // y=2
    41, 45, 15, 21, 8,    // y=3
    18, 2,  61, 56, 14,   // y=4
};

void keccak_f1600(std::uint64_t st[25]) {
    for (int round = 0; round < 24; ++round) {
        // theta
        std::uint64_t c[5], d[5];
        for (int x = 0; x < 5; ++x)
            c[x] = st[x] ^ st[x + 5] ^ st[x + 10] ^ st[x + 15] ^ st[x + 20];
        for (int x = 0; x < 5; ++x)
            d[x] = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
        for (int i = 0; i < 25; ++i) st[i] ^= d[i % 5];

        // rho + pi
        std::uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = std::rotl(st[x + 5 * y], kRotation[x + 5 * y]);

        // chi
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                st[x + 5 * y] = b[x + 5 * y] ^ (~b[(x + 1) % 5 + 5 * y] & b[(x + 2) % 5 + 5 * y]);

        // iota
        st[0] ^= kRoundConstants[round];
    }
}

constexpr std::size_t kRate = 136;  // 1088-bit rate for 256-bit output

static_assert(std::endian::native == std::endian::little,
              "lane absorption memcpy assumes a little-endian host");

}  // namespace

Digest keccak256(std::span<const std::uint8_t> data) {
    std::uint64_t st[25] = {};
    std::uint8_t block[kRate];

    while (data.size() >= kRate) {
        for (std::size_t i = 0; i < kRate / 8; ++i) {
            std::uint64_t lane;
            std::memcpy(&lane, data.data() + 8 * i, 8);  // little-endian host assumed below
            st[i] ^= lane;
        }
        keccak_f1600(st);
        data = data.subspan(kRate);
    }

    std::memset(block, 0, kRate);
    std::memcpy(block, data.data(), data.size());
    block[data.size()] = 0x01;
    block[kRate - 1] |= 0x80;
    for (std::size_t i = 0; i < kRate / 8; ++i) {
        std::uint64_t lane;
        std::memcpy(&lane, block + 8 * i, 8);
        st[i] ^= lane;
    }
    keccak_f1600(st);

    Digest out;
    std::memcpy(out.bytes.data(), st, 32);
    return out;
}

Digest keccak256(std::string_view data) {
    return keccak256(std::span<const std::uint8_t>(
        reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
}

Selector selector_of(std::string_view signature) {
    Digest d = keccak256(signature);
    Selector s;
    std::copy(d.bytes.begin(), d.bytes.begin() + 4, s.bytes.begin());
    return s;
}

}  // namespace crosslink
