#include <doctest.h>

#include <string>
#include <vector>

#include "crosslink/keccak.hpp"

using namespace crosslink;

// Expected digests come from an independent reference implementation of
// Keccak-256, itself validated against the published vectors for the empty
// string and the ubiquitous transfer(address,uint256) selector.

TEST_CASE("keccak256 known-answer vectors") {
    CHECK(keccak256("").hex() == "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(keccak256("abc").hex() ==
          "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    CHECK(keccak256("The quick brown fox jumps over the lazy dog").hex() ==
          "4d741b6f1eb29cb2a9b9911c82f56fa8d73b04959d3d9d222895df6c0b28aa15");
}

TEST_CASE("keccak256 of a 32-byte value") {
    std::vector<std::uint8_t> one(32, 0);
    one[31] = 1;
    CHECK(keccak256(one).hex() ==
          "b10e2d527612073b26eecdfd717e6a320cf44b4afac2b0732d9fcbe2b7fa0cf6");
}

TEST_CASE("keccak256 input exactly one rate block long") {
    // 136 bytes fills the whole rate; padding must spill into a second block
    std::string block(136, static_cast<char>(0xa3));
    CHECK(keccak256(block).hex() ==
          "b82d89d96e5575d11a9e1f4cabb2a45e60899e69a19a724cd796bdcf13511018");
}

TEST_CASE("function selectors match the contract signatures") {
    CHECK(selector_of("getValue()").hex() == "20965255");
    CHECK(selector_of("setValue(uint256)").hex() == "55241077");
    CHECK(selector_of("handleResult(uint256)").hex() == "c2d57bbc");
    CHECK(selector_of("handleWriteResult(bool)").hex() == "78df3f47");
    CHECK(selector_of("transfer(address,uint256)").hex() == "a9059cbb");
}

TEST_CASE("selector is a deterministic function of the signature") {
    CHECK(selector_of("getValue()") == selector_of("getValue()"));
    CHECK(selector_of("getValue()") != selector_of("getValue(uint256)"));
}
