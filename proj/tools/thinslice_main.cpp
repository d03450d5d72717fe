#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thinslice/errors.hpp"
#include "thinslice/pipeline.hpp"

namespace {

struct CliOverrides {
    std::optional<std::string> out_dir;
    std::optional<std::string> provider;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicates;
    std::optional<double> alpha;
    std::optional<std::string> tails;
    std::optional<std::string> band;
};

thinslice::RunConfig resolve(const std::string& config_path, const CliOverrides& o) {
    auto cfg = thinslice::load_config(config_path);
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.seed) cfg.seed = *o.seed;
    if (o.replicates) cfg.replicates = *o.replicates;
    if (o.alpha) cfg.alpha = *o.alpha;
    if (o.tails) {
        if (*o.tails == "one") {
            cfg.tails = thinslice::Tails::One;
        } else if (*o.tails == "two") {
            cfg.tails = thinslice::Tails::Two;
        } else {
            throw thinslice::ConfigError("--tails must be one|two");
        }
    }
    if (o.band) {
        if (*o.band == "minmax") {
            cfg.band = thinslice::Band::MinMax;
        } else if (*o.band == "sd") {
            cfg.band = thinslice::Band::SD;
        } else {
            throw thinslice::ConfigError("--band must be minmax|sd");
        }
    }
    if (o.provider) {
        if (*o.provider != "mock") {
            throw thinslice::ConfigError("--provider only supports 'mock'");
        }
        cfg.providers = thinslice::default_mock_providers(cfg.seed,
                                                          thinslice::MockMode::QualitySignal);
    }
    thinslice::validate_config(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LLM thin-slicing pipeline for speech transcripts"};
    app.require_subcommand(1);

    std::string config_path;
    CliOverrides o;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out-dir", o.out_dir, "Override output directory");
    app.add_option("--provider", o.provider, "Override providers ('mock' = offline)");
    app.add_option("--seed", o.seed, "Mock provider seed");
    app.add_option("--replicates", o.replicates, "Ratings replicates per cell");
    app.add_option("--alpha", o.alpha, "Significance level");
    app.add_option("--tails", o.tails, "Significance tails: one|two");
    app.add_option("--band", o.band, "Figure band: minmax|sd");

    auto* slice = app.add_subcommand("slice", "Slice transcripts, write manifest and slices");
    auto* evaluate = app.add_subcommand("evaluate", "Collect ratings for the full matrix");
    auto* analyze = app.add_subcommand("analyze", "Compute curves, ICCs, and validation stats");
    auto* report = app.add_subcommand("report", "Render table1 and figure2 artifacts");
    auto* validate = app.add_subcommand("validate-config", "Validate the config and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = resolve(config_path, o);
        if (slice->parsed()) {
            thinslice::cmd_slice(cfg);
        } else if (evaluate->parsed()) {
            thinslice::cmd_evaluate(cfg);
        } else if (analyze->parsed()) {
            thinslice::cmd_analyze(cfg);
        } else if (report->parsed()) {
            thinslice::cmd_report(cfg);
        } else if (validate->parsed()) {
            std::printf("config OK\n");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return thinslice::exit_code_for(e);
    }
    return 0;
}
