#pragma once

#include <stdexcept>
#include <string>

namespace turbodec {

/// Invalid code/channel/decoder configuration (bad polynomial, unknown
/// blocklength, non-bijective interleaver parameters, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Caller broke a function contract (length mismatch, backward without a
/// recorded workspace, sigma <= 0, ...).
class ContractError : public std::logic_error {
public:
    explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace turbodec
