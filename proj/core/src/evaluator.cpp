#include "thinslice/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "thinslice/csv.hpp"
#include "thinslice/errors.hpp"

namespace thinslice {

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    auto t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RatingRecord::cell_key() const {
    return provider_id + '\x1f' + model_name + '\x1f' + prompt_id + '\x1f' + speech_id + '\x1f' +
           spec.kind_name() + '\x1f' + spec.value_repr();
}

double RatingsTable::completeness() const {
    if (records.empty()) return 0.0;
    std::size_t present = 0;
    for (const auto& r : records) {
        if (r.rating) ++present;
    }
    return static_cast<double>(present) / static_cast<double>(records.size());
}

void RatingsTable::sort() {
    std::sort(records.begin(), records.end(), [](const RatingRecord& a, const RatingRecord& b) {
        return std::tie(a.provider_id, a.model_name, a.prompt_id, a.speech_id, a.spec) <
               std::tie(b.provider_id, b.model_name, b.prompt_id, b.speech_id, b.spec);
    });
}

std::optional<int> try_parse_rating(const std::string& raw, int lo, int hi) {
    size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    if (b == e) return std::nullopt;
    long value = 0;
    size_t i = b;
    bool neg = false;
    if (raw[i] == '-') {
        neg = true;
        ++i;
    }
    if (i == e) return std::nullopt;
    for (; i < e; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(raw[i]))) return std::nullopt;
        value = value * 10 + (raw[i] - '0');
        if (value > 1000000) return std::nullopt;
    }
    if (neg) value = -value;
    if (value < lo || value > hi) return std::nullopt;
    return static_cast<int>(value);
}

int parse_rating(const std::string& raw, int lo, int hi) {
    if (auto v = try_parse_rating(raw, lo, hi)) return *v;
    throw DataError("invalid rating response: \"" + raw + "\" (expected a plain integer in [" +
                    std::to_string(lo) + "," + std::to_string(hi) + "])");
}

RatingRecord evaluate_slice(Provider& provider, const PromptTemplate& prompt, const Slice& slice,
                            const EvalOptions& opts, ResponseCache* cache, long* provider_calls) {
    RatingRequest req;
    req.provider_id = provider.provider_id();
    req.model_name = provider.model_name();
    req.prompt_id = prompt.prompt_id;
    req.prompt_text = render(prompt, slice.text);
    req.speech_id = slice.speech_id;
    req.spec = slice.spec;
    req.slice_text = slice.text;
    req.temperature = opts.temperature;

    RatingRecord rec;
    rec.speech_id = slice.speech_id;
    rec.spec = slice.spec;
    rec.provider_id = req.provider_id;
    rec.model_name = req.model_name;
    rec.prompt_id = prompt.prompt_id;
    rec.timestamp = opts.clock ? opts.clock() : utc_timestamp();

    std::string cache_key;
    if (cache) {
        cache_key = ResponseCache::key(req);
        if (auto hit = cache->get(cache_key)) {
            rec.rating = hit->rating;
            rec.raw_response = hit->raw_response;
            rec.attempt_count = hit->attempts;
            rec.cache_hit = true;
            return rec;
        }
    }

    int attempts = 0;
    for (;;) {
        ++attempts;
        if (provider_calls) ++*provider_calls;
        // A fresh, stateless request per attempt: identical prompt, no history.
        std::string raw = provider.complete(req);
        rec.raw_response = raw;
        rec.attempt_count = attempts;
        rec.rating = try_parse_rating(raw, prompt.scale_min, prompt.scale_max);
        if (rec.rating || attempts > opts.max_retries) break;
    }

    if (cache) {
        cache->put(cache_key, {rec.raw_response, rec.rating, rec.attempt_count});
    }
    return rec;
}

namespace {

constexpr const char* kRatingsHeader =
    "speech_id,kind,value,provider_id,model_name,prompt_id,rating,attempts,cache_hit,timestamp";

std::vector<std::string> record_fields(const RatingRecord& r) {
    return {r.speech_id,
            r.spec.kind_name(),
            r.spec.value_repr(),
            r.provider_id,
            r.model_name,
            r.prompt_id,
            r.rating ? std::to_string(*r.rating) : std::string(),
            std::to_string(r.attempt_count),
            r.cache_hit ? "true" : "false",
            r.timestamp};
}

RatingRecord record_from_fields(const std::vector<std::string>& f,
                                const std::filesystem::path& path) {
    if (f.size() != 10) {
        throw DataError("malformed ratings row in " + path.string());
    }
    RatingRecord r;
    r.speech_id = f[0];
    r.spec = SliceSpec::parse(f[1], f[2]);
    r.provider_id = f[3];
    r.model_name = f[4];
    r.prompt_id = f[5];
    if (!f[6].empty()) r.rating = parse_rating(f[6]);
    r.attempt_count = std::stoi(f[7]);
    r.cache_hit = f[8] == "true";
    r.timestamp = f[9];
    return r;
}

}  // namespace

void write_ratings_csv(const RatingsTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write ratings file: " + path.string());
    out << kRatingsHeader << "\n";
    for (const auto& r : table.records) {
        out << csv::join_row(record_fields(r)) << "\n";
    }
}

RatingsTable read_ratings_csv(const std::filesystem::path& path) {
    auto rows = csv::read_file(path);
    if (rows.empty() || csv::join_row(rows[0]) != kRatingsHeader) {
        throw DataError("bad ratings header in " + path.string());
    }
    RatingsTable table;
    std::set<std::string> seen;
    for (size_t i = 1; i < rows.size(); ++i) {
        auto rec = record_from_fields(rows[i], path);
        if (!seen.insert(rec.cell_key()).second) {
            throw DataError("duplicate rating cell in " + path.string() + ": " + rec.speech_id);
        }
        table.records.push_back(std::move(rec));
    }
    return table;
}

RunMatrixResult run_matrix(const Corpus& corpus, const std::vector<SliceSpec>& grid,
                           const std::vector<PromptTemplate>& prompts,
                           const std::vector<ProviderRun>& providers, ResponseCache* cache,
                           const RunMatrixOptions& opts) {
    if (corpus.transcripts.empty() || grid.empty() || prompts.empty() || providers.empty()) {
        throw DataError("run_matrix requires non-empty corpus, grid, prompts, and providers");
    }

    // Resume: cells already in the checkpoint are reused verbatim.
    std::map<std::string, RatingRecord> done;
    if (!opts.checkpoint_path.empty() && std::filesystem::exists(opts.checkpoint_path)) {
        auto prior = read_ratings_csv(opts.checkpoint_path);
        for (auto& r : prior.records) done.emplace(r.cell_key(), std::move(r));
    }

    struct Cell {
        const ProviderRun* run;
        const PromptTemplate* prompt;
        const Transcript* transcript;
        SliceSpec spec;
        size_t index;
    };
    std::vector<Cell> cells;
    cells.reserve(providers.size() * prompts.size() * corpus.transcripts.size() * grid.size());
    for (const auto& pr : providers) {
        for (const auto& prompt : prompts) {
            for (const auto& t : corpus.transcripts) {
                for (const auto& spec : grid) {
                    cells.push_back({&pr, &prompt, &t, spec, cells.size()});
                }
            }
        }
    }

    RunMatrixResult result;
    result.table.records.resize(cells.size());

    std::mutex mu;  // guards checkpoint stream, counters
    std::ofstream checkpoint;
    if (!opts.checkpoint_path.empty()) {
        bool fresh = !std::filesystem::exists(opts.checkpoint_path);
        checkpoint.open(opts.checkpoint_path, std::ios::binary | std::ios::app);
        if (!checkpoint) {
            throw DataError("cannot open checkpoint: " + opts.checkpoint_path.string());
        }
        if (fresh) checkpoint << kRatingsHeader << "\n";
    }

    std::exception_ptr first_error;

    auto work = [&](const ProviderRun& pr, size_t begin, size_t end) {
        // Each worker owns a contiguous range of this provider's cells.
        for (size_t i = begin; i < end; ++i) {
            const Cell& cell = cells[i];
            try {
                auto it = done.find(RatingRecord{cell.transcript->speech_id, cell.spec,
                                                pr.provider->provider_id(),
                                                pr.provider->model_name(),
                                                cell.prompt->prompt_id}
                                        .cell_key());
                RatingRecord rec;
                if (it != done.end()) {
                    rec = it->second;
                } else {
                    Slice slice = make_slice(*cell.transcript, cell.spec);
                    EvalOptions eo;
                    eo.max_retries = pr.max_retries;
                    eo.temperature = pr.temperature;
                    eo.clock = opts.clock;
                    long calls = 0;
                    rec = evaluate_slice(*pr.provider, *cell.prompt, slice, eo, cache, &calls);
                    std::lock_guard<std::mutex> lock(mu);
                    result.provider_calls += calls;
                    if (rec.cache_hit) ++result.cache_hits;
                    if (checkpoint.is_open()) {
                        checkpoint << csv::join_row(record_fields(rec)) << "\n";
                        checkpoint.flush();
                    }
                }
                result.table.records[cell.index] = std::move(rec);
            } catch (const ProviderError& e) {
                // Transport failure for one cell: record as missing, keep going.
                RatingRecord rec;
                rec.speech_id = cell.transcript->speech_id;
                rec.spec = cell.spec;
                rec.provider_id = pr.provider->provider_id();
                rec.model_name = pr.provider->model_name();
                rec.prompt_id = cell.prompt->prompt_id;
                rec.raw_response = std::string("ERROR: ") + e.what();
                rec.timestamp = opts.clock ? opts.clock() : utc_timestamp();
                // Not checkpointed: a resumed run should retry failed cells.
                result.table.records[cell.index] = std::move(rec);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    // Bounded fan-out per provider: at most max_parallel workers in flight.
    size_t cells_per_provider = prompts.size() * corpus.transcripts.size() * grid.size();
    size_t offset = 0;
    for (const auto& pr : providers) {
        size_t n = cells_per_provider;
        int workers = std::max(1, pr.max_parallel);
        if (workers == 1) {
            work(pr, offset, offset + n);
        } else {
            std::vector<std::thread> threads;
            size_t chunk = (n + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                size_t b = offset + std::min(n, static_cast<size_t>(w) * chunk);
                size_t e = offset + std::min(n, static_cast<size_t>(w + 1) * chunk);
                if (b < e) threads.emplace_back(work, std::cref(pr), b, e);
            }
            for (auto& th : threads) th.join();
        }
        offset += n;
    }

    if (first_error) std::rethrow_exception(first_error);
    result.table.sort();
    return result;
}

}  // namespace thinslice
