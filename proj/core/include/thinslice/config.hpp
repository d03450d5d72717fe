#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thinslice/http_provider.hpp"
#include "thinslice/mock_provider.hpp"
#include "thinslice/prompts.hpp"
#include "thinslice/report.hpp"
#include "thinslice/stats.hpp"

namespace thinslice {

struct ProviderSpec {
    enum class Type { Mock, Http };
    Type type = Type::Mock;
    std::string provider_id;
    std::string model_name;
    int max_parallel = 1;
    int max_retries = 2;
    double temperature = 0.0;
    // http only
    std::string endpoint;
    std::string credential_env_var;
    double timeout_seconds = 60.0;
    double requests_per_second = 0.0;
    // mock only
    MockMode mock_mode = MockMode::Digest;
    double noise_scale = 0.9;
};

struct RunConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path out_dir = "out";
    std::filesystem::path cache_dir = "cache";
    std::optional<std::filesystem::path> human_ratings;
    std::size_t min_words = 50;
    std::vector<double> fraction_grid;  // must contain 1.0
    std::vector<int> word_grid;         // may be empty
    bool evaluate_word_grid = false;
    std::vector<std::string> prompt_ids;  // defaults to P1..P5
    std::vector<PromptTemplate> custom_prompts;
    std::vector<ProviderSpec> providers;
    double alpha = 0.05;
    Tails tails = Tails::One;
    Band band = Band::MinMax;
    std::uint64_t seed = 42;
    int replicates = 1;
};

/// Parse and fully validate a JSON config file. Secrets are never read here;
/// only environment variable names appear in the config.
RunConfig load_config(const std::filesystem::path& path);

/// Re-check all invariants (grids sorted and non-empty, fraction grid anchored
/// at 1.0, alpha in (0,1), ...). Throws ConfigError.
void validate_config(const RunConfig& cfg);

/// Resolve the configured prompt set: built-in ids plus custom templates.
std::vector<PromptTemplate> resolve_prompts(const RunConfig& cfg);

/// The two standard offline mock raters used by `--provider mock`.
std::vector<ProviderSpec> default_mock_providers(std::uint64_t seed, MockMode mode,
                                                 double noise_scale = 0.9);

}  // namespace thinslice
