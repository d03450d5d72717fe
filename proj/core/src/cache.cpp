#include "thinslice/cache.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "thinslice/digest.hpp"
#include "thinslice/errors.hpp"

namespace thinslice {

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::string ResponseCache::key(const RatingRequest& req) {
    std::string payload = req.provider_id;
    payload.push_back('\x1f');
    payload += req.model_name;
    payload.push_back('\x1f');
    payload += req.prompt_id;
    payload.push_back('\x1f');
    payload += sha256_hex(req.slice_text);
    payload.push_back('\x1f');
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", req.temperature);
    payload += buf;
    return sha256_hex(payload);
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
    return dir_ / (key + ".json");
}

std::optional<CachedResponse> ResponseCache::get(const std::string& key) const {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
        CachedResponse r;
        r.raw_response = j.at("raw_response").get<std::string>();
        if (!j.at("rating").is_null()) r.rating = j.at("rating").get<int>();
        r.attempts = j.at("attempts").get<int>();
        return r;
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;  // corrupt entry, treat as miss
    }
}

void ResponseCache::put(const std::string& key, const CachedResponse& value) {
    nlohmann::json j;
    j["raw_response"] = value.raw_response;
    if (value.rating) {
        j["rating"] = *value.rating;
    } else {
        j["rating"] = nullptr;
    }
    j["attempts"] = value.attempts;

    auto final_path = path_for(key);
    auto tmp_path = final_path;
    tmp_path += ".tmp";
    {
        std::ofstream out(tmp_path, std::ios::binary);
        if (!out) throw DataError("cannot write cache entry: " + tmp_path.string());
        out << j.dump();
    }
    std::filesystem::rename(tmp_path, final_path);
}

}  // namespace thinslice
