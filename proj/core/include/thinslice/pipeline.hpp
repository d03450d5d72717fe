#pragma once

#include "thinslice/config.hpp"

namespace thinslice {

/// Orchestration of the CLI subcommands. Each command validates its inputs
/// before any side effect and throws ConfigError/DataError/ProviderError on
/// failure; exit-code mapping lives in the CLI wrapper.

/// Load the corpus, write manifest.csv, slices.csv, and the content-addressed
/// slice text cache.
void cmd_slice(const RunConfig& cfg);

struct EvaluateStats {
    std::size_t records = 0;
    long provider_calls = 0;
    long cache_hits = 0;
};

/// Run the full rating matrix and write ratings.csv (plus ratings.repN.csv
/// for extra replicates). Resumable: interrupted runs pick up from the
/// checkpoint without re-billing completed cells.
EvaluateStats cmd_evaluate(const RunConfig& cfg);

/// Compute part-to-whole curves, agreement ICCs, and (when human ratings are
/// configured) the human-vs-LLM correlation at the 20% slice.
void cmd_analyze(const RunConfig& cfg);

/// Render table1.csv/table1.txt and figure2.svg from the analyze outputs.
void cmd_report(const RunConfig& cfg);

/// Per-rater human ratings, header rater_id,speech_id,rating.
std::map<std::string, std::map<std::string, double>> read_human_ratings(
    const std::filesystem::path& path);

}  // namespace thinslice
