#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "thinslice/corpus.hpp"
#include "thinslice/evaluator.hpp"
#include "thinslice/mock_provider.hpp"
#include "thinslice/prompts.hpp"
#include "thinslice/slicer.hpp"
#include "thinslice/stats.hpp"

namespace {

std::string make_text(int words, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> len(2, 10);
    std::string text;
    for (int i = 0; i < words; ++i) {
        if (i) text.push_back(' ');
        int n = len(rng);
        for (int j = 0; j < n; ++j) text.push_back(static_cast<char>('a' + rng() % 26));
    }
    return text;
}

void BM_Tokenize(benchmark::State& state) {
    auto text = make_text(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(thinslice::tokenize(text));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(1500)->Arg(15000);

void BM_SliceByFraction(benchmark::State& state) {
    auto t = thinslice::make_transcript("s", make_text(1500, 2));
    for (auto _ : state) {
        benchmark::DoNotOptimize(thinslice::slice_by_fraction(t, 0.2));
    }
}
BENCHMARK(BM_SliceByFraction);

void BM_Pearson(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(1.0, 10.0);
    size_t n = static_cast<size_t>(state.range(0));
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = unif(rng);
        y[i] = 0.7 * x[i] + unif(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(thinslice::pearson(x, y));
    }
}
BENCHMARK(BM_Pearson)->Arg(128)->Arg(4096);

void BM_CriticalR(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(thinslice::critical_r(128, 0.05, thinslice::Tails::One));
    }
}
BENCHMARK(BM_CriticalR);

void BM_Icc(benchmark::State& state) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unif(1.0, 10.0);
    std::vector<std::vector<double>> m(static_cast<size_t>(state.range(0)),
                                       std::vector<double>(10));
    for (auto& row : m)
        for (auto& v : row) v = unif(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(thinslice::icc(m, thinslice::IccForm::ICC_2_1));
    }
}
BENCHMARK(BM_Icc)->Arg(128);

void BM_ParseRating(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(thinslice::try_parse_rating("  7\n"));
        benchmark::DoNotOptimize(thinslice::try_parse_rating("8/10"));
    }
}
BENCHMARK(BM_ParseRating);

void BM_MockRating(benchmark::State& state) {
    thinslice::MockOptions opts;
    opts.mode = thinslice::MockMode::QualitySignal;
    thinslice::MockProvider provider("mock", "mock-model", opts);
    auto t = thinslice::make_transcript("s", make_text(1500, 5));
    auto slice = thinslice::slice_by_fraction(t, 0.2);
    thinslice::RatingRequest req;
    req.provider_id = "mock";
    req.model_name = "mock-model";
    req.prompt_id = "P1";
    req.prompt_text = thinslice::builtin_prompt("P1").text;
    req.speech_id = t.speech_id;
    req.spec = slice.spec;
    req.slice_text = slice.text;
    for (auto _ : state) {
        benchmark::DoNotOptimize(provider.complete(req));
    }
}
BENCHMARK(BM_MockRating);

}  // namespace

BENCHMARK_MAIN();
