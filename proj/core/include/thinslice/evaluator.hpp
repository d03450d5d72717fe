#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thinslice/cache.hpp"
#include "thinslice/corpus.hpp"
#include "thinslice/prompts.hpp"
#include "thinslice/provider.hpp"
#include "thinslice/slicer.hpp"

namespace thinslice {

/// One independent rating of one slice. rating is empty when the provider
/// never produced a parseable integer in range.
struct RatingRecord {
    std::string speech_id;
    SliceSpec spec;
    std::string provider_id;
    std::string model_name;
    std::string prompt_id;
    std::optional<int> rating;
    std::string raw_response;
    int attempt_count = 1;
    std::string timestamp;  // ISO-8601 UTC
    bool cache_hit = false;

    /// Uniqueness key within a RatingsTable.
    std::string cell_key() const;
};

struct RatingsTable {
    std::vector<RatingRecord> records;

    std::size_t size() const { return records.size(); }
    double completeness() const;  // fraction of non-missing ratings
    void sort();                  // canonical order: provider,model,prompt,speech,spec
};

/// Strict parse: trim ASCII whitespace, then accept iff the remainder is a
/// plain base-10 integer in [lo,hi]. Throws DataError otherwise.
int parse_rating(const std::string& raw, int lo = 1, int hi = 10);
std::optional<int> try_parse_rating(const std::string& raw, int lo = 1, int hi = 10);

struct EvalOptions {
    int max_retries = 2;  // extra attempts after a parse failure
    double temperature = 0.0;
    std::function<std::string()> clock;  // defaults to UTC now; fixed for mock runs
};

/// One stateless request-parse-retry cycle for a single cell. Consults the
/// cache first when given one.
RatingRecord evaluate_slice(Provider& provider, const PromptTemplate& prompt, const Slice& slice,
                            const EvalOptions& opts, ResponseCache* cache = nullptr,
                            long* provider_calls = nullptr);

struct ProviderRun {
    std::shared_ptr<Provider> provider;
    int max_parallel = 1;
    int max_retries = 2;
    double temperature = 0.0;
};

struct RunMatrixOptions {
    std::function<std::string()> clock;
    /// Append-only checkpoint; completed cells found here are not re-run.
    std::filesystem::path checkpoint_path;
};

struct RunMatrixResult {
    RatingsTable table;
    long provider_calls = 0;
    long cache_hits = 0;
};

/// Evaluate the full speeches x providers x prompts x grid matrix. Every
/// requested cell appears exactly once in the result (rated or missing);
/// output order is canonical regardless of scheduling.
RunMatrixResult run_matrix(const Corpus& corpus, const std::vector<SliceSpec>& grid,
                           const std::vector<PromptTemplate>& prompts,
                           const std::vector<ProviderRun>& providers, ResponseCache* cache,
                           const RunMatrixOptions& opts = {});

/// ratings.csv: speech_id,kind,value,provider_id,model_name,prompt_id,
/// rating,attempts,cache_hit,timestamp. Missing rating -> empty field.
void write_ratings_csv(const RatingsTable& table, const std::filesystem::path& path);
RatingsTable read_ratings_csv(const std::filesystem::path& path);

std::string utc_timestamp();

}  // namespace thinslice
