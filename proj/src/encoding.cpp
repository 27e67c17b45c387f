#include "crosslink/encoding.hpp"

#include <stdexcept>

namespace crosslink {

std::vector<std::uint8_t> encode_words(std::span<const Word> words) {
    Encoder e;
    e.words(words);
    return e.bytes();
}

std::optional<std::vector<Word>> decode_words(std::span<const std::uint8_t> data) {
    if (data.size() < 4) return std::nullopt;
    std::uint32_t count = (std::uint32_t(data[0]) << 24) | (std::uint32_t(data[1]) << 16) |
                          (std::uint32_t(data[2]) << 8) | std::uint32_t(data[3]);
    if (data.size() != 4 + std::size_t(count) * 32) return std::nullopt;
    std::vector<Word> out(count);
    for (std::uint32_t i = 0; i < count; ++i)
        std::copy(data.begin() + 4 + i * 32, data.begin() + 4 + (i + 1) * 32, out[i].bytes.begin());
    return out;
}

Encoder& Encoder::u8(std::uint8_t v) {
    out_.push_back(v);
    return *this;
}

Encoder& Encoder::u32(std::uint32_t v) {
    for (int i = 3; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
    for (int i = 7; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    return *this;
}

Encoder& Encoder::str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    out_.insert(out_.end(), s.begin(), s.end());
    return *this;
}

Encoder& Encoder::words(std::span<const Word> ws) {
    u32(static_cast<std::uint32_t>(ws.size()));
    for (const Word& w : ws) fixed(w);
    return *this;
}

Encoder& Encoder::raw(std::span<const std::uint8_t> data) {
    out_.insert(out_.end(), data.begin(), data.end());
    return *this;
}

void Decoder::need(std::size_t n) {
    if (data_.size() - pos_ < n) throw std::runtime_error("decode underflow");
}

std::uint8_t Decoder::u8() {
    need(1);
    return data_[pos_++];
}

std::uint32_t Decoder::u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
    return v;
}

std::uint64_t Decoder::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
    return v;
}

std::string Decoder::str() {
    std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
}

std::vector<Word> Decoder::words() {
    std::uint32_t n = u32();
    std::vector<Word> out(n);
    for (std::uint32_t i = 0; i < n; ++i) out[i] = fixed<32>();
    return out;
}

}  // namespace crosslink
