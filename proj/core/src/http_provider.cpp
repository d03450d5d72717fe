#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "thinslice/http_provider.hpp"

#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "thinslice/errors.hpp"

namespace thinslice {

namespace {

// endpoint -> (scheme://host, path)
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must be an http(s) URL: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

struct HttpProvider::Impl {
    std::mutex mu;
    std::chrono::steady_clock::time_point next_allowed = std::chrono::steady_clock::now();

    // Token-bucket style pacing: block until the next request slot.
    void pace(double requests_per_second) {
        if (requests_per_second <= 0.0) return;
        std::chrono::steady_clock::time_point wake;
        {
            std::lock_guard<std::mutex> lock(mu);
            auto now = std::chrono::steady_clock::now();
            auto interval = std::chrono::duration<double>(1.0 / requests_per_second);
            wake = std::max(now, next_allowed);
            next_allowed = wake + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                      interval);
        }
        std::this_thread::sleep_until(wake);
    }
};

HttpProvider::HttpProvider(ProviderConfig cfg)
    : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
    if (cfg_.credential_env_var.empty()) {
        throw ConfigError("provider '" + cfg_.provider_id + "' has no credential_env_var");
    }
    const char* key = std::getenv(cfg_.credential_env_var.c_str());
    if (key == nullptr || *key == '\0') {
        throw ConfigError("credential missing: environment variable " + cfg_.credential_env_var +
                          " is not set");
    }
    api_key_ = key;
}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::complete(const RatingRequest& req) {
    auto [base, path] = split_endpoint(cfg_.endpoint);

    nlohmann::json body;
    body["model"] = cfg_.model_name;
    body["messages"] = nlohmann::json::array({
        {{"role", "user"}, {"content", req.prompt_text}},
    });
    body["temperature"] = req.temperature;
    std::string payload = body.dump();

    std::string last_error;
    int transport_attempts = cfg_.max_retries + 1;
    double backoff = 1.0;

    for (int attempt = 0; attempt < transport_attempts; ++attempt) {
        impl_->pace(cfg_.requests_per_second);

        httplib::Client client(base);
        client.set_connection_timeout(std::chrono::duration<double>(cfg_.timeout_seconds));
        client.set_read_timeout(std::chrono::duration<double>(cfg_.timeout_seconds));
        client.set_bearer_token_auth(api_key_);

        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
        } else if (res->status == 429) {
            double retry_after = backoff;
            if (res->has_header("Retry-After")) {
                try {
                    retry_after = std::stod(res->get_header_value("Retry-After"));
                } catch (...) {
                }
            }
            if (attempt + 1 == transport_attempts) {
                throw ProviderError("rate limited by " + cfg_.provider_id, retry_after);
            }
            std::this_thread::sleep_for(std::chrono::duration<double>(retry_after));
            backoff *= 2.0;
            continue;
        } else if (res->status >= 400) {
            std::string snippet = res->body.substr(0, 200);
            if (snippet.find("context_length") != std::string::npos ||
                snippet.find("maximum context length") != std::string::npos) {
                throw ProviderError("context overflow for speech " + req.speech_id + ": " +
                                    snippet);
            }
            last_error = "HTTP " + std::to_string(res->status) + ": " + snippet;
        } else {
            try {
                auto j = nlohmann::json::parse(res->body);
                return j.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                last_error = std::string("unparseable response body: ") + e.what();
            }
        }
        if (attempt + 1 < transport_attempts) {
            std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
            backoff *= 2.0;
        }
    }
    throw ProviderError("provider " + cfg_.provider_id + " failed after " +
                        std::to_string(transport_attempts) + " attempts: " + last_error);
}

}  // namespace thinslice
