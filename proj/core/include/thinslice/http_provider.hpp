#pragma once

#include <memory>
#include <string>

#include "thinslice/provider.hpp"

namespace thinslice {

/// Remote chat-completion endpoint configuration. The API key is read from
/// the environment variable named here, never from config file contents.
struct ProviderConfig {
    std::string provider_id;
    std::string model_name;
    std::string endpoint;  // e.g. https://api.openai.com/v1/chat/completions
    std::string credential_env_var;
    int max_parallel = 4;
    int max_retries = 2;
    double timeout_seconds = 60.0;
    double temperature = 0.0;
    /// Minimum spacing between requests (token bucket refill), 0 = unlimited.
    double requests_per_second = 0.0;
};

/// OpenAI-style chat-completion client. One stateless request per call:
/// a single user message holding the rendered prompt, no history.
/// Transport failures and 429s are retried with exponential backoff before
/// surfacing as ProviderError.
class HttpProvider : public Provider {
public:
    explicit HttpProvider(ProviderConfig cfg);
    ~HttpProvider() override;

    std::string provider_id() const override { return cfg_.provider_id; }
    std::string model_name() const override { return cfg_.model_name; }
    std::string complete(const RatingRequest& req) override;

private:
    struct Impl;
    ProviderConfig cfg_;
    std::string api_key_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace thinslice
