#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crosslink/keccak.hpp"
#include "crosslink/types.hpp"

namespace crosslink {

// Canonical byte encoding used for parameters, return data and every digest
// preimage in the simulator: a 4-byte big-endian word count followed by that
// many 32-byte words. Booleans are the words 1/0, integers are big-endian
// right-aligned words.
std::vector<std::uint8_t> encode_words(std::span<const Word> words);
std::optional<std::vector<Word>> decode_words(std::span<const std::uint8_t> data);

// Incremental writer for compound structures (transactions, calls, blocks).
class Encoder {
public:
    Encoder& u8(std::uint8_t v);
    Encoder& u32(std::uint32_t v);   // big-endian
    Encoder& u64(std::uint64_t v);   // big-endian
    Encoder& str(std::string_view s);  // u32 length + raw bytes

    template <std::size_t N>
    Encoder& fixed(const FixedBytes<N>& b) {
        out_.insert(out_.end(), b.bytes.begin(), b.bytes.end());
        return *this;
    }

    Encoder& words(std::span<const Word> ws);
    Encoder& raw(std::span<const std::uint8_t> data);

    const std::vector<std::uint8_t>& bytes() const { return out_; }
    Digest digest() const { return keccak256(out_); }

private:
    std::vector<std::uint8_t> out_;
};

// Mirror-image reader; every getter throws std::runtime_error on underflow
// so malformed envelopes surface loudly instead of decoding garbage.
class Decoder {
public:
    explicit Decoder(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::string str();
    std::vector<Word> words();

    template <std::size_t N>
    FixedBytes<N> fixed() {
        need(N);
        FixedBytes<N> out;
        std::copy(data_.begin() + pos_, data_.begin() + pos_ + N, out.bytes.begin());
        pos_ += N;
        return out;
    }

    bool done() const { return pos_ == data_.size(); }

private:
    void need(std::size_t n);
    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace crosslink
