#include <doctest.h>

#include "crosslink/encoding.hpp"
#include "crosslink/netsim.hpp"

using namespace crosslink;

TEST_CASE("word encoding layout is a big-endian count followed by raw words") {
    std::vector<Word> words{Word::from_u64(42)};
    auto bytes = encode_words(words);
    REQUIRE(bytes.size() == 4 + 32);
    CHECK(bytes[0] == 0);
    CHECK(bytes[3] == 1);
    CHECK(bytes[4 + 31] == 42);
    for (std::size_t i = 4; i < 4 + 31; ++i) CHECK(bytes[i] == 0);
}

TEST_CASE("boolean words") {
    CHECK(bool_word(true) == Word::from_u64(1));
    CHECK(bool_word(false) == Word{});
}

TEST_CASE("decode rejects malformed buffers") {
    std::vector<Word> words{Word::from_u64(7), Word::from_u64(9)};
    auto bytes = encode_words(words);

    CHECK(decode_words(bytes).has_value());

    auto truncated = bytes;
    truncated.pop_back();
    CHECK(!decode_words(truncated).has_value());

    auto short_header = std::vector<std::uint8_t>{0, 0, 1};
    CHECK(!decode_words(short_header).has_value());

    auto wrong_count = bytes;
    wrong_count[3] = 9;
    CHECK(!decode_words(wrong_count).has_value());
}

TEST_CASE("encode/decode round trip over random word lists") {
    Rng rng(1234);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<Word> words(rng.below(8));
        for (Word& w : words) {
            w = Word::from_u64(rng.next());
            if (rng.chance(0.3)) w.bytes[rng.below(32)] = static_cast<std::uint8_t>(rng.below(256));
        }
        auto decoded = decode_words(encode_words(words));
        REQUIRE(decoded.has_value());
        CHECK(*decoded == words);
    }
}

TEST_CASE("hex parsing is left-padded and round-trips") {
    CHECK(Word::from_hex("0x2a") == Word::from_u64(42));
    CHECK(Word::from_hex("2a") == Word::from_u64(42));
    CHECK(Address::from_hex("0xa1").hex() == "00000000000000000000000000000000000000a1");
    CHECK_THROWS(Word::from_hex(std::string(66, 'f')));
    CHECK_THROWS(Word::from_hex("0xzz"));

    Word w = Word::from_u64(0xdeadbeef);
    CHECK(Word::from_hex(w.hex()) == w);
}

TEST_CASE("u64 round trip and overflow") {
    CHECK(Word::from_u64(123456789).to_u64() == 123456789);
    Word big;
    big.bytes[0] = 1;
    CHECK_THROWS_AS(big.to_u64(), std::overflow_error);
}

TEST_CASE("decoder underflow throws") {
    std::vector<std::uint8_t> tiny{1, 2, 3};
    Decoder d(tiny);
    CHECK_THROWS(d.u64());
}
