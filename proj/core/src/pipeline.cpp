#include "thinslice/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "thinslice/csv.hpp"
#include "thinslice/digest.hpp"
#include "thinslice/errors.hpp"

namespace thinslice {

namespace {

void log_line(const std::string& msg) { std::fprintf(stderr, "[thinslice] %s\n", msg.c_str()); }

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out) {
        if (c == '/' || c == '\\' || c == ' ' || c == ',') c = '-';
    }
    return out;
}

std::string num(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::vector<SliceSpec> build_grid(const RunConfig& cfg, bool include_words) {
    std::vector<SliceSpec> grid;
    for (double f : cfg.fraction_grid) grid.push_back(SliceSpec::fraction(f));
    if (include_words) {
        for (int n : cfg.word_grid) grid.push_back(SliceSpec::fixed_words(n));
    }
    return grid;
}

std::shared_ptr<Provider> instantiate(const ProviderSpec& spec, std::uint64_t seed) {
    if (spec.type == ProviderSpec::Type::Mock) {
        MockOptions opts;
        opts.seed = seed;
        opts.mode = spec.mock_mode;
        opts.noise_scale = spec.noise_scale;
        return std::make_shared<MockProvider>(spec.provider_id, spec.model_name, opts);
    }
    ProviderConfig pc;
    pc.provider_id = spec.provider_id;
    pc.model_name = spec.model_name;
    pc.endpoint = spec.endpoint;
    pc.credential_env_var = spec.credential_env_var;
    pc.max_parallel = spec.max_parallel;
    pc.max_retries = spec.max_retries;
    pc.timeout_seconds = spec.timeout_seconds;
    pc.temperature = spec.temperature;
    pc.requests_per_second = spec.requests_per_second;
    return std::make_shared<HttpProvider>(pc);
}

bool all_mock(const RunConfig& cfg) {
    return std::all_of(cfg.providers.begin(), cfg.providers.end(), [](const ProviderSpec& p) {
        return p.type == ProviderSpec::Type::Mock;
    });
}

void write_curve_csv(const CorrelationCurve& curve, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write curve: " + path.string());
    out << "fraction,r,n,t,df,p_one,p_two\n";
    for (const auto& p : curve.points) {
        SliceSpec frac = SliceSpec::fraction(p.fraction);
        out << frac.value_repr() << ',' << num(p.corr.r) << ',' << p.corr.n << ','
            << num(p.corr.t_stat, 4) << ',' << p.corr.df << ',' << num(p.corr.p_one_tailed, 8)
            << ',' << num(p.corr.p_two_tailed, 8) << "\n";
    }
}

CorrelationCurve read_curve_csv(const std::filesystem::path& path) {
    auto rows = csv::read_file(path);
    if (rows.empty() || rows[0] != csv::parse_row("fraction,r,n,t,df,p_one,p_two")) {
        throw DataError("bad curve header in " + path.string());
    }
    CorrelationCurve curve;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 7) throw DataError("bad curve row in " + path.string());
        CurvePoint p;
        p.fraction = std::stod(rows[i][0]);
        p.corr.r = std::stod(rows[i][1]);
        p.corr.n = std::stoi(rows[i][2]);
        p.corr.t_stat = std::stod(rows[i][3]);
        p.corr.df = std::stoi(rows[i][4]);
        p.corr.p_one_tailed = std::stod(rows[i][5]);
        p.corr.p_two_tailed = std::stod(rows[i][6]);
        curve.points.push_back(p);
    }
    return curve;
}

}  // namespace

void cmd_slice(const RunConfig& cfg) {
    Corpus corpus = load_corpus(cfg.corpus_dir, cfg.min_words);
    std::filesystem::create_directories(cfg.out_dir);
    write_manifest(corpus, cfg.out_dir / "manifest.csv");
    for (const auto& ex : corpus.excluded) {
        log_line("excluded " + ex.file + " (" + std::to_string(ex.word_count) + " words < " +
                 std::to_string(cfg.min_words) + ")");
    }

    auto slice_dir = cfg.cache_dir / "slices";
    std::filesystem::create_directories(slice_dir);

    std::ofstream out(cfg.out_dir / "slices.csv", std::ios::binary);
    if (!out) throw DataError("cannot write slices.csv");
    out << "speech_id,kind,value,word_count,sha256\n";
    auto grid = build_grid(cfg, /*include_words=*/!cfg.word_grid.empty());
    for (const auto& t : corpus.transcripts) {
        for (const auto& spec : grid) {
            Slice s = make_slice(t, spec);
            std::string digest = sha256_hex(s.text);
            auto text_path = slice_dir / (digest + ".txt");
            if (!std::filesystem::exists(text_path)) {
                std::ofstream tf(text_path, std::ios::binary);
                tf << s.text;
            }
            out << csv::join_row({s.speech_id, spec.kind_name(), spec.value_repr(),
                                  std::to_string(s.word_count), digest})
                << "\n";
        }
    }
    log_line("sliced " + std::to_string(corpus.transcripts.size()) + " speeches x " +
             std::to_string(grid.size()) + " specs");
}

EvaluateStats cmd_evaluate(const RunConfig& cfg) {
    if (cfg.providers.empty()) {
        throw ConfigError("no providers configured; pass --provider mock for offline runs");
    }
    Corpus corpus = load_corpus(cfg.corpus_dir, cfg.min_words);
    std::filesystem::create_directories(cfg.out_dir);
    auto prompts = resolve_prompts(cfg);
    auto grid = build_grid(cfg, cfg.evaluate_word_grid);

    EvaluateStats stats;
    for (int rep = 1; rep <= cfg.replicates; ++rep) {
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep - 1);
        std::vector<ProviderRun> runs;
        for (const auto& spec : cfg.providers) {
            ProviderRun run;
            run.provider = instantiate(spec, seed);
            run.max_parallel = spec.max_parallel;
            run.max_retries = spec.max_retries;
            run.temperature = spec.temperature;
            runs.push_back(std::move(run));
        }

        auto cache_dir = cfg.cache_dir / (rep == 1 ? "responses"
                                                   : "responses_rep" + std::to_string(rep));
        ResponseCache cache(cache_dir);

        std::string suffix = rep == 1 ? "" : ".rep" + std::to_string(rep);
        auto ratings_path = cfg.out_dir / ("ratings" + suffix + ".csv");
        auto checkpoint_path = cfg.out_dir / ("ratings" + suffix + ".partial.csv");

        RunMatrixOptions opts;
        opts.checkpoint_path = checkpoint_path;
        if (all_mock(cfg)) {
            opts.clock = [] { return std::string("1970-01-01T00:00:00Z"); };
        }

        auto result = run_matrix(corpus, grid, prompts, runs, &cache, opts);
        write_ratings_csv(result.table, ratings_path);
        std::filesystem::remove(checkpoint_path);

        stats.records += result.table.size();
        stats.provider_calls += result.provider_calls;
        stats.cache_hits += result.cache_hits;
        log_line("replicate " + std::to_string(rep) + ": " +
                 std::to_string(result.table.size()) + " records, " +
                 std::to_string(result.provider_calls) + " provider calls, " +
                 std::to_string(result.cache_hits) + " cache hits, completeness " +
                 num(result.table.completeness(), 4));
    }
    return stats;
}

std::map<std::string, std::map<std::string, double>> read_human_ratings(
    const std::filesystem::path& path) {
    auto rows = csv::read_file(path);
    if (rows.empty() || rows[0] != csv::parse_row("rater_id,speech_id,rating")) {
        throw DataError("bad human ratings header in " + path.string() +
                        " (expected rater_id,speech_id,rating)");
    }
    std::map<std::string, std::map<std::string, double>> by_rater;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 3) throw DataError("bad human ratings row in " + path.string());
        int rating = parse_rating(rows[i][2]);
        by_rater[rows[i][0]][rows[i][1]] = rating;
    }
    if (by_rater.empty()) throw DataError("no human ratings in " + path.string());
    return by_rater;
}

void cmd_analyze(const RunConfig& cfg) {
    auto ratings_path = cfg.out_dir / "ratings.csv";
    if (!std::filesystem::exists(ratings_path)) {
        throw DataError("ratings.csv not found in " + cfg.out_dir.string() +
                        "; run `thinslice evaluate` first");
    }
    RatingsTable table = read_ratings_csv(ratings_path);

    // Distinct rating configurations, canonical order.
    std::set<std::tuple<std::string, std::string, std::string>> configs;
    for (const auto& r : table.records) {
        configs.insert({r.provider_id, r.model_name, r.prompt_id});
    }

    std::vector<CorrelationCurve> curves;
    std::ofstream index(cfg.out_dir / "curves_index.csv", std::ios::binary);
    if (!index) throw DataError("cannot write curves_index.csv");
    index << "file,provider_id,model_name,prompt_id\n";
    for (const auto& [provider, model, prompt] : configs) {
        auto curve = part_to_whole_curve(table, provider, model, prompt);
        std::string file = "curve_" + sanitize(provider) + "_" + sanitize(model) + "_" +
                           sanitize(prompt) + ".csv";
        write_curve_csv(curve, cfg.out_dir / file);
        index << csv::join_row({file, provider, model, prompt}) << "\n";
        curves.push_back(std::move(curve));
    }
    auto avg = average_curve(curves);
    write_curve_csv(avg, cfg.out_dir / "curve_AVERAGE.csv");
    index << "curve_AVERAGE.csv,AVERAGE,AVERAGE,AVERAGE\n";

    // Agreement: each (provider, model, prompt) acts as one rater.
    std::ofstream icc_out(cfg.out_dir / "icc_report.csv", std::ios::binary);
    if (!icc_out) throw DataError("cannot write icc_report.csv");
    icc_out << "analysis,form,value,n_targets,k_raters,ms_rows,ms_cols,ms_error\n";
    auto emit_icc = [&](const std::string& analysis, const IccResult& r) {
        icc_out << csv::join_row({analysis, r.form == IccForm::ICC_2_1 ? "ICC(2,1)" : "ICC(2,k)",
                                  num(r.value), std::to_string(r.n_targets),
                                  std::to_string(r.k_raters), num(r.ms_rows), num(r.ms_cols),
                                  num(r.ms_error)})
                << "\n";
    };

    auto llm_sources = [&](const SliceSpec& spec) {
        std::vector<std::pair<std::string, std::map<std::string, double>>> sources;
        for (const auto& [provider, model, prompt] : configs) {
            RatingFilter f;
            f.provider_id = provider;
            f.model_name = model;
            f.prompt_id = prompt;
            f.spec = spec;
            sources.emplace_back(provider + "/" + model + "/" + prompt,
                                 group_average(table, f).means);
        }
        return sources;
    };

    std::ofstream pairwise_out(cfg.out_dir / "pairwise_correlations.csv", std::ios::binary);
    pairwise_out << "analysis,source_a,source_b,r,n\n";

    for (double f : {0.2, 1.0}) {
        bool present = std::find(cfg.fraction_grid.begin(), cfg.fraction_grid.end(), f) !=
                       cfg.fraction_grid.end();
        if (!present) continue;
        std::string name = f == 1.0 ? "llm_agreement_full" : "llm_agreement_f0.2";
        auto agreement = agreement_matrix(llm_sources(SliceSpec::fraction(f)));
        emit_icc(name, agreement.icc_2_1);
        emit_icc(name, agreement.icc_2_k);
        for (const auto& [a, b, corr] : agreement.pairwise) {
            pairwise_out << csv::join_row({name, a, b, num(corr.r), std::to_string(corr.n)})
                         << "\n";
        }
    }

    // Human validation: ICC per rater group, then human-vs-LLM at the 20% slice.
    if (cfg.human_ratings) {
        auto by_rater = read_human_ratings(*cfg.human_ratings);

        // Raters who saw the same speech set form one group.
        std::map<std::set<std::string>, std::vector<std::string>> groups;
        for (const auto& [rater, ratings] : by_rater) {
            std::set<std::string> speeches;
            for (const auto& [id, _] : ratings) speeches.insert(id);
            groups[speeches].push_back(rater);
        }
        int group_no = 0;
        for (const auto& [speeches, raters] : groups) {
            ++group_no;
            if (raters.size() < 2 || speeches.size() < 2) {
                log_line("human group " + std::to_string(group_no) +
                         " too small for ICC, skipped");
                continue;
            }
            std::vector<std::pair<std::string, std::map<std::string, double>>> sources;
            for (const auto& rater : raters) sources.emplace_back(rater, by_rater.at(rater));
            auto agreement = agreement_matrix(sources);
            std::string name = "human_group_" + std::to_string(group_no);
            emit_icc(name, agreement.icc_2_1);
            emit_icc(name, agreement.icc_2_k);
        }

        // Group-averaged human ratings vs the LLM grand average at f = 0.2.
        std::map<std::string, std::pair<double, int>> human_sums;
        for (const auto& [rater, ratings] : by_rater) {
            for (const auto& [id, v] : ratings) {
                auto& [sum, count] = human_sums[id];
                sum += v;
                ++count;
            }
        }
        std::map<std::string, double> human_means;
        for (const auto& [id, sc] : human_sums) human_means[id] = sc.first / sc.second;

        RatingFilter llm_filter;
        llm_filter.spec = SliceSpec::fraction(0.2);
        auto llm_means = group_average(table, llm_filter).means;

        auto corr = cross_source_correlation(human_means, llm_means);
        std::ofstream cross(cfg.out_dir / "cross_source.csv", std::ios::binary);
        if (!cross) throw DataError("cannot write cross_source.csv");
        cross << "analysis,r,n,t,df,p_one,p_two\n";
        cross << csv::join_row({"human_vs_llm_f0.2", num(corr.r), std::to_string(corr.n),
                                num(corr.t_stat, 4), std::to_string(corr.df),
                                num(corr.p_one_tailed, 8), num(corr.p_two_tailed, 8)})
              << "\n";
        log_line("human vs LLM at 20% slice: r = " + num(corr.r, 3) + ", n = " +
                 std::to_string(corr.n));
    }
    log_line("analyzed " + std::to_string(configs.size()) + " configurations");
}

void cmd_report(const RunConfig& cfg) {
    auto index_path = cfg.out_dir / "curves_index.csv";
    if (!std::filesystem::exists(index_path)) {
        throw DataError("curves_index.csv not found in " + cfg.out_dir.string() +
                        "; run `thinslice analyze` first");
    }
    auto rows = csv::read_file(index_path);
    std::vector<CorrelationCurve> curves;
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != 4) throw DataError("bad curves_index.csv row");
        if (rows[i][1] == "AVERAGE") continue;
        auto curve = read_curve_csv(cfg.out_dir / rows[i][0]);
        curve.provider_id = rows[i][1];
        curve.model_name = rows[i][2];
        curve.prompt_id = rows[i][3];
        curves.push_back(std::move(curve));
    }
    if (curves.empty()) throw DataError("no curves listed in curves_index.csv");

    auto table = render_slice_table(curves);
    write_slice_table_csv(table, cfg.out_dir / "table1.csv");
    write_slice_table_text(table, cfg.out_dir / "table1.txt");

    int n = 0;
    for (const auto& c : curves) {
        for (const auto& p : c.points) n = std::max(n, p.corr.n);
    }
    double threshold = critical_r(n, cfg.alpha, Tails::One);
    write_curve_plot_svg(curves, cfg.band, threshold, cfg.out_dir / "figure2.svg");
    log_line("report written: table1.csv, table1.txt, figure2.svg (threshold r = " +
             num(threshold, 3) + " at n = " + std::to_string(n) + ")");
}

}  // namespace thinslice
