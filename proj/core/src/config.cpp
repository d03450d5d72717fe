#include "thinslice/config.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "thinslice/errors.hpp"

namespace thinslice {

namespace {

using nlohmann::json;

MockMode parse_mock_mode(const std::string& s) {
    if (s == "digest") return MockMode::Digest;
    if (s == "quality" || s == "quality-signal") return MockMode::QualitySignal;
    throw ConfigError("unknown mock mode: " + s + " (expected digest|quality)");
}

ProviderSpec parse_provider(const json& j) {
    ProviderSpec p;
    std::string type = j.value("type", "http");
    if (type == "mock") {
        p.type = ProviderSpec::Type::Mock;
    } else if (type == "http") {
        p.type = ProviderSpec::Type::Http;
    } else {
        throw ConfigError("unknown provider type: " + type);
    }
    p.provider_id = j.at("provider_id").get<std::string>();
    p.model_name = j.at("model_name").get<std::string>();
    p.max_parallel = j.value("max_parallel", p.type == ProviderSpec::Type::Mock ? 1 : 4);
    p.max_retries = j.value("max_retries", 2);
    p.temperature = j.value("temperature", 0.0);
    if (p.type == ProviderSpec::Type::Http) {
        p.endpoint = j.at("endpoint").get<std::string>();
        p.credential_env_var = j.at("credential_env_var").get<std::string>();
        p.timeout_seconds = j.value("timeout_seconds", 60.0);
        p.requests_per_second = j.value("requests_per_second", 0.0);
    } else {
        p.mock_mode = parse_mock_mode(j.value("mode", "digest"));
        p.noise_scale = j.value("noise_scale", 0.9);
    }
    return p;
}

}  // namespace

std::vector<ProviderSpec> default_mock_providers(std::uint64_t seed, MockMode mode,
                                                 double noise_scale) {
    ProviderSpec a;
    a.type = ProviderSpec::Type::Mock;
    a.provider_id = "mock-openai";
    a.model_name = "mock-gpt";
    a.mock_mode = mode;
    a.noise_scale = noise_scale;
    ProviderSpec b = a;
    b.provider_id = "mock-google";
    b.model_name = "mock-gemini";
    (void)seed;  // seed applied when providers are instantiated
    return {a, b};
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }

    RunConfig cfg;
    try {
        cfg.corpus_dir = j.at("corpus_dir").get<std::string>();
        cfg.out_dir = j.value("out_dir", std::string("out"));
        cfg.cache_dir = j.value("cache_dir", std::string("cache"));
        if (j.contains("human_ratings")) {
            cfg.human_ratings = std::filesystem::path(j.at("human_ratings").get<std::string>());
        }
        cfg.min_words = j.value("min_words", std::size_t{50});
        cfg.fraction_grid = j.value("fraction_grid", default_fraction_grid());
        cfg.word_grid = j.value("word_grid", default_word_grid());
        cfg.evaluate_word_grid = j.value("evaluate_word_grid", false);
        cfg.prompt_ids = j.value("prompt_ids",
                                 std::vector<std::string>{"P1", "P2", "P3", "P4", "P5"});
        if (j.contains("custom_prompts")) {
            for (const auto& cp : j.at("custom_prompts")) {
                std::string id = cp.at("prompt_id").get<std::string>();
                std::string text;
                if (cp.contains("file")) {
                    std::ifstream pf(cp.at("file").get<std::string>());
                    if (!pf) {
                        throw ConfigError("cannot read prompt file for " + id);
                    }
                    text.assign(std::istreambuf_iterator<char>(pf),
                                std::istreambuf_iterator<char>());
                } else {
                    text = cp.at("text").get<std::string>();
                }
                cfg.custom_prompts.push_back(make_custom_prompt(id, std::move(text)));
            }
        }
        if (j.contains("providers")) {
            for (const auto& pj : j.at("providers")) cfg.providers.push_back(parse_provider(pj));
        }
        cfg.alpha = j.value("alpha", 0.05);
        std::string tails = j.value("tails", "one");
        if (tails == "one") {
            cfg.tails = Tails::One;
        } else if (tails == "two") {
            cfg.tails = Tails::Two;
        } else {
            throw ConfigError("tails must be one|two, got: " + tails);
        }
        std::string band = j.value("band", "minmax");
        if (band == "minmax") {
            cfg.band = Band::MinMax;
        } else if (band == "sd") {
            cfg.band = Band::SD;
        } else {
            throw ConfigError("band must be minmax|sd, got: " + band);
        }
        cfg.seed = j.value("seed", std::uint64_t{42});
        cfg.replicates = j.value("replicates", 1);
    } catch (const json::exception& e) {
        throw ConfigError("config error in " + path.string() + ": " + e.what());
    }

    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (cfg.corpus_dir.empty()) throw ConfigError("corpus_dir is required");
    if (cfg.fraction_grid.empty()) throw ConfigError("fraction_grid must be non-empty");
    if (!std::is_sorted(cfg.fraction_grid.begin(), cfg.fraction_grid.end())) {
        throw ConfigError("fraction_grid must be sorted ascending");
    }
    for (double f : cfg.fraction_grid) {
        if (!(f > 0.0) || f > 1.0) {
            throw ConfigError("fraction_grid values must lie in (0,1]");
        }
    }
    if (std::find(cfg.fraction_grid.begin(), cfg.fraction_grid.end(), 1.0) ==
        cfg.fraction_grid.end()) {
        throw ConfigError("fraction_grid must contain 1.0 (the part-to-whole anchor)");
    }
    if (std::adjacent_find(cfg.fraction_grid.begin(), cfg.fraction_grid.end()) !=
        cfg.fraction_grid.end()) {
        throw ConfigError("fraction_grid contains duplicates");
    }
    if (!std::is_sorted(cfg.word_grid.begin(), cfg.word_grid.end())) {
        throw ConfigError("word_grid must be sorted ascending");
    }
    for (int n : cfg.word_grid) {
        if (n < 1) throw ConfigError("word_grid values must be >= 1");
    }
    if (cfg.prompt_ids.empty() && cfg.custom_prompts.empty()) {
        throw ConfigError("at least one prompt is required");
    }
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must be in (0,1)");
    if (cfg.replicates < 1) throw ConfigError("replicates must be >= 1");
    for (const auto& p : cfg.providers) {
        if (p.provider_id.empty() || p.model_name.empty()) {
            throw ConfigError("providers need provider_id and model_name");
        }
        if (p.max_parallel < 1) throw ConfigError("max_parallel must be >= 1");
        if (p.max_retries < 0) throw ConfigError("max_retries must be >= 0");
        if (p.temperature < 0.0) throw ConfigError("temperature must be >= 0");
        if (p.type == ProviderSpec::Type::Http && p.endpoint.empty()) {
            throw ConfigError("http provider " + p.provider_id + " needs an endpoint");
        }
    }
}

std::vector<PromptTemplate> resolve_prompts(const RunConfig& cfg) {
    std::vector<PromptTemplate> prompts;
    for (const auto& id : cfg.prompt_ids) prompts.push_back(builtin_prompt(id));
    for (const auto& p : cfg.custom_prompts) prompts.push_back(p);
    return prompts;
}

}  // namespace thinslice
