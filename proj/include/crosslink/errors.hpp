#pragma once

#include <stdexcept>
#include <string>

namespace crosslink {

struct DuplicateAddress : std::runtime_error {
    explicit DuplicateAddress(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownContract : std::runtime_error {
    explicit UnknownContract(const std::string& what) : std::runtime_error(what) {}
};

struct HeightGap : std::runtime_error {
    explicit HeightGap(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownTargetChain : std::runtime_error {
    explicit UnknownTargetChain(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownChain : std::runtime_error {
    explicit UnknownChain(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownRequest : std::runtime_error {
    explicit UnknownRequest(const std::string& what) : std::runtime_error(what) {}
};

struct DoubleSettle : std::runtime_error {
    explicit DoubleSettle(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct SimInvariantViolation : std::runtime_error {
    explicit SimInvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crosslink
