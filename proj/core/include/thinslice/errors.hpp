#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace thinslice {

// Exit-code mapping: 2 config, 3 data, 4 provider/transport.

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ProviderError : public std::runtime_error {
public:
    explicit ProviderError(const std::string& msg,
                           std::optional<double> retry_after_seconds = std::nullopt)
        : std::runtime_error(msg), retry_after_seconds(retry_after_seconds) {}

    std::optional<double> retry_after_seconds;
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const ProviderError*>(&e)) return 4;
    return 1;
}

}  // namespace thinslice
