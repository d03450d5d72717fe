#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "thinslice/provider.hpp"

namespace thinslice {

struct CachedResponse {
    std::string raw_response;
    std::optional<int> rating;
    int attempts = 1;
};

/// Content-addressed on-disk cache of provider responses. Key =
/// sha256(provider_id, model_name, prompt_id, sha256(slice_text), temperature),
/// so re-runs of an unchanged matrix never touch the network. Writes go
/// through a temp file + rename; safe under single-writer-per-key access.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    static std::string key(const RatingRequest& req);

    std::optional<CachedResponse> get(const std::string& key) const;
    void put(const std::string& key, const CachedResponse& value);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(const std::string& key) const;
    std::filesystem::path dir_;
};

}  // namespace thinslice
