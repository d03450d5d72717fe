#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "thinslice/errors.hpp"
#include "thinslice/mock_provider.hpp"
#include "thinslice/stats.hpp"

using namespace thinslice;

namespace {

// Independent definitional oracle: r via raw-moment sums, a different
// algebraic route than the implementation's centered two-pass.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

// Independent brute-force two-way ANOVA: cell-by-cell residual sum of squares
// instead of the subtraction identity used by the implementation.
struct AnovaOracle {
    double ms_rows, ms_cols, ms_error;
};
AnovaOracle anova_oracle(const std::vector<std::vector<double>>& m) {
    size_t n = m.size(), k = m[0].size();
    double grand = 0;
    for (const auto& row : m) {
        for (double v : row) grand += v;
    }
    grand /= static_cast<double>(n * k);
    std::vector<double> rmean(n, 0), cmean(k, 0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) {
            rmean[i] += m[i][j] / static_cast<double>(k);
            cmean[j] += m[i][j] / static_cast<double>(n);
        }
    }
    double ss_rows = 0, ss_cols = 0, ss_err = 0;
    for (size_t i = 0; i < n; ++i) ss_rows += k * (rmean[i] - grand) * (rmean[i] - grand);
    for (size_t j = 0; j < k; ++j) ss_cols += n * (cmean[j] - grand) * (cmean[j] - grand);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) {
            double resid = m[i][j] - rmean[i] - cmean[j] + grand;
            ss_err += resid * resid;
        }
    }
    return {ss_rows / (n - 1.0), ss_cols / (k - 1.0), ss_err / ((n - 1.0) * (k - 1.0))};
}

const std::vector<std::vector<double>> kClassicMatrix = {
    {9, 2, 5, 8}, {6, 1, 3, 2}, {8, 4, 6, 8}, {7, 1, 2, 6}, {10, 5, 6, 9}, {6, 2, 4, 7}};

}  // namespace

TEST_CASE("pearson: exact anchor cases") {
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}).r ==
          doctest::Approx(1.0));
    CHECK(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{6, 4, 2}).r ==
          doctest::Approx(-1.0));
    auto res = pearson(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4});
    CHECK(res.r == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(res.n == 4);
    CHECK(res.df == 2);
}

TEST_CASE("pearson: error cases") {
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), DataError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
    CHECK_THROWS_AS(pearson(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}),
                    DataError);
}

TEST_CASE("pearson: 1000 randomized vectors match the definitional oracle") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> len(3, 40);
    std::normal_distribution<double> value(0.0, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        int n = len(rng);
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = value(rng);
            y[i] = 0.3 * x[i] + value(rng);
        }
        double expected = pearson_oracle(x, y);
        if (std::fabs(expected) >= 1.0 - 1e-12) continue;
        CHECK(pearson(x, y).r == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("pearson: affine invariance and symmetry") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> value(0.0, 2.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 5 + static_cast<int>(rng() % 30);
        std::vector<double> x(n), y(n), xt(n);
        for (int i = 0; i < n; ++i) {
            x[i] = value(rng);
            y[i] = value(rng);
        }
        double a = scale(rng), b = value(rng);
        for (int i = 0; i < n; ++i) xt[i] = a * x[i] + b;
        double r = pearson(x, y).r;
        CHECK(pearson(xt, y).r == doctest::Approx(r).epsilon(1e-12));
        CHECK(pearson(y, x).r == doctest::Approx(r).epsilon(1e-12));
        CHECK(std::fabs(r) <= 1.0);
    }
}

TEST_CASE("t_statistic: anchors") {
    CHECK(t_statistic(0.69, 24) == doctest::Approx(4.47).epsilon(0.002));
    CHECK(t_statistic(0.0, 50) == 0.0);
    CHECK(t_statistic(0.5, 11) == doctest::Approx(0.5 * 3.0 / std::sqrt(0.75)).epsilon(1e-12));
    CHECK_THROWS_AS(t_statistic(1.0, 10), DataError);
    CHECK_THROWS_AS(t_statistic(0.5, 2), DataError);
}

TEST_CASE("student t distribution: CDF and quantile sanity") {
    CHECK(student_t_cdf(0.0, 10) == doctest::Approx(0.5));
    // Large-df t approaches the normal: P(T < 1.96) ~ 0.975
    CHECK(student_t_cdf(1.96, 10000) == doctest::Approx(0.975).epsilon(1e-3));
    // Frozen reference values (scipy.stats.t): see matching quantiles below.
    CHECK(student_t_quantile(0.975, 126) == doctest::Approx(1.9789706019673934).epsilon(1e-8));
    CHECK(student_t_quantile(0.95, 126) == doctest::Approx(1.6570369819845607).epsilon(1e-8));
    CHECK(student_t_quantile(0.975, 8) == doctest::Approx(2.306004135204166).epsilon(1e-8));
    for (double p : {0.6, 0.9, 0.99}) {
        for (int df : {3, 12, 126}) {
            CHECK(student_t_cdf(student_t_quantile(p, df), df) ==
                  doctest::Approx(p).epsilon(1e-9));
        }
    }
}

TEST_CASE("critical_r: paper anchor and derived two-tailed value") {
    CHECK(critical_r(128, 0.05, Tails::One) == doctest::Approx(0.145).epsilon(0.015));
    CHECK(critical_r(128, 0.05, Tails::One) == doctest::Approx(0.14603794532718817).epsilon(1e-8));
    CHECK(critical_r(128, 0.05, Tails::Two) == doctest::Approx(0.1736230894598548).epsilon(1e-8));
    // alpha -> 1 limit: threshold collapses toward 0
    CHECK(critical_r(128, 0.999, Tails::Two) < 0.01);
    CHECK_THROWS_AS(critical_r(3, 0.05, Tails::One), DataError);
    CHECK_THROWS_AS(critical_r(128, 0.0, Tails::One), DataError);
}

TEST_CASE("critical_r: monotonicity") {
    CHECK(critical_r(200, 0.05, Tails::One) < critical_r(50, 0.05, Tails::One));
    CHECK(critical_r(50, 0.05, Tails::One) < critical_r(10, 0.05, Tails::One));
    CHECK(critical_r(128, 0.01, Tails::One) > critical_r(128, 0.05, Tails::One));
}

TEST_CASE("critical_r round-trips through t_statistic") {
    for (int n : {10, 24, 128}) {
        double rc = critical_r(n, 0.05, Tails::Two);
        double t = t_statistic(rc, n);
        CHECK(t == doctest::Approx(student_t_quantile(0.975, n - 2)).epsilon(1e-4));
    }
}

TEST_CASE("icc: classic 6x4 reliability matrix matches brute-force ANOVA") {
    auto oracle = anova_oracle(kClassicMatrix);
    auto r21 = icc(kClassicMatrix, IccForm::ICC_2_1);
    CHECK(r21.ms_rows == doctest::Approx(oracle.ms_rows).epsilon(1e-10));
    CHECK(r21.ms_cols == doctest::Approx(oracle.ms_cols).epsilon(1e-10));
    CHECK(r21.ms_error == doctest::Approx(oracle.ms_error).epsilon(1e-10));

    double k = 4, n = 6;
    double expected21 = (oracle.ms_rows - oracle.ms_error) /
                        (oracle.ms_rows + (k - 1) * oracle.ms_error +
                         (k / n) * (oracle.ms_cols - oracle.ms_error));
    CHECK(r21.value == doctest::Approx(expected21).epsilon(1e-10));
    CHECK(r21.value == doctest::Approx(0.29).epsilon(0.01));

    auto r2k = icc(kClassicMatrix, IccForm::ICC_2_k);
    double expected2k = (oracle.ms_rows - oracle.ms_error) /
                        (oracle.ms_rows + (oracle.ms_cols - oracle.ms_error) / n);
    CHECK(r2k.value == doctest::Approx(expected2k).epsilon(1e-10));
}

TEST_CASE("icc: randomized matrices match brute-force ANOVA") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> dim_n(2, 12), dim_k(2, 8);
    std::normal_distribution<double> value(5.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        int n = dim_n(rng), k = dim_k(rng);
        std::vector<std::vector<double>> m(n, std::vector<double>(k));
        for (auto& row : m) {
            for (auto& v : row) v = value(rng);
        }
        auto oracle = anova_oracle(m);
        auto res = icc(m, IccForm::ICC_2_1);
        CHECK(res.ms_rows == doctest::Approx(oracle.ms_rows).epsilon(1e-9));
        CHECK(res.ms_cols == doctest::Approx(oracle.ms_cols).epsilon(1e-9));
        CHECK(res.ms_error == doctest::Approx(oracle.ms_error).epsilon(1e-8));
        CHECK(res.value <= 1.0 + 1e-12);
    }
}

TEST_CASE("icc: trivial and degenerate cases") {
    // Targets differ, raters agree perfectly per target
    std::vector<std::vector<double>> perfect = {{1, 1}, {5, 5}, {9, 9}};
    CHECK(icc(perfect, IccForm::ICC_2_1).value == doctest::Approx(1.0));

    std::vector<std::vector<double>> constant = {{4, 4}, {4, 4}, {4, 4}};
    CHECK_THROWS_AS(icc(constant, IccForm::ICC_2_1), DataError);

    CHECK_THROWS_AS(icc({{1, 2}}, IccForm::ICC_2_1), DataError);
    CHECK_THROWS_AS(icc({{1}, {2}}, IccForm::ICC_2_1), DataError);
    CHECK_THROWS_AS(icc({{1, 2}, {3}}, IccForm::ICC_2_1), DataError);
}

TEST_CASE("icc: invariances") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> value(5.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::vector<double>> m(6, std::vector<double>(4));
        for (auto& row : m) {
            for (auto& v : row) v = value(rng);
        }
        auto r21 = icc(m, IccForm::ICC_2_1);
        auto r2k = icc(m, IccForm::ICC_2_k);
        if (r21.value > 0) CHECK(r2k.value >= r21.value);  // Spearman-Brown direction

        auto shifted = m;
        for (auto& row : shifted) {
            for (auto& v : row) v += 17.5;
        }
        CHECK(icc(shifted, IccForm::ICC_2_1).value == doctest::Approx(r21.value).epsilon(1e-9));
    }
}

namespace {

RatingsTable table_from_cells(
    const std::vector<std::tuple<std::string, double, std::string, std::optional<int>>>& cells) {
    // (speech, fraction, prompt, rating), one provider/model
    RatingsTable t;
    for (const auto& [speech, f, prompt, rating] : cells) {
        RatingRecord r;
        r.speech_id = speech;
        r.spec = SliceSpec::fraction(f);
        r.provider_id = "prov";
        r.model_name = "model";
        r.prompt_id = prompt;
        r.rating = rating;
        t.records.push_back(r);
    }
    return t;
}

}  // namespace

TEST_CASE("group_average: deletion of missing ratings") {
    auto t = table_from_cells({
        {"s1", 1.0, "P1", 7},
        {"s2", 1.0, "P1", 6},
        {"s2", 1.0, "P2", 8},
        {"s3", 1.0, "P1", 6},
        {"s3", 1.0, "P2", std::nullopt},
        {"s3", 1.0, "P3", 9},
        {"s4", 1.0, "P1", std::nullopt},
    });
    RatingFilter f;
    f.spec = SliceSpec::fraction(1.0);
    auto avg = group_average(t, f);
    CHECK(avg.means.at("s1") == doctest::Approx(7.0));
    CHECK(avg.means.at("s2") == doctest::Approx(7.0));
    CHECK(avg.means.at("s3") == doctest::Approx(7.5));
    CHECK(avg.means.count("s4") == 0);
    REQUIRE(avg.all_missing_ids.size() == 1);
    CHECK(avg.all_missing_ids[0] == "s4");
}

TEST_CASE("part_to_whole_curve: perfect part-whole agreement gives r = 1") {
    std::vector<std::tuple<std::string, double, std::string, std::optional<int>>> cells;
    int ratings[] = {3, 8, 5, 9, 2};
    for (int i = 0; i < 5; ++i) {
        for (double f : {0.1, 0.5, 1.0}) {
            cells.push_back({"s" + std::to_string(i), f, "P1", ratings[i]});
        }
    }
    auto curve = part_to_whole_curve(table_from_cells(cells), "prov", "model", "P1");
    REQUIRE(curve.points.size() == 2);  // 1.0 excluded
    for (const auto& p : curve.points) CHECK(p.corr.r == doctest::Approx(1.0));
}

TEST_CASE("part_to_whole_curve: pairwise deletion and missing-anchor error") {
    std::vector<std::tuple<std::string, double, std::string, std::optional<int>>> cells;
    int part[] = {3, 8, 5, 9, 2, 7};
    int whole[] = {4, 7, 5, 9, 1, 8};
    for (int i = 0; i < 6; ++i) {
        cells.push_back({"s" + std::to_string(i), 0.2, "P1", part[i]});
        cells.push_back({"s" + std::to_string(i), 1.0, "P1",
                         i == 5 ? std::optional<int>{} : std::optional<int>{whole[i]}});
    }
    auto curve = part_to_whole_curve(table_from_cells(cells), "prov", "model", "P1");
    REQUIRE(curve.points.size() == 1);
    CHECK(curve.points[0].corr.n == 5);  // s5 dropped pairwise
    std::vector<double> px(part, part + 5), wx(whole, whole + 5);
    CHECK(curve.points[0].corr.r == doctest::Approx(pearson(px, wx).r));

    // No fraction-1.0 cells at all
    auto no_anchor = table_from_cells({{"s1", 0.2, "P1", 5}, {"s2", 0.2, "P1", 6}});
    CHECK_THROWS_AS(part_to_whole_curve(no_anchor, "prov", "model", "P1"), DataError);
}

TEST_CASE("average_curve: mean of correlations per fraction") {
    CorrelationCurve a{"p", "m", "P1", {{0.1, {.r = 0.2, .n = 10}}, {0.5, {.r = 0.6, .n = 10}}}};
    CorrelationCurve b{"p", "m", "P2", {{0.1, {.r = 0.4, .n = 12}}, {0.5, {.r = 0.8, .n = 12}}}};
    auto avg = average_curve({a, b});
    CHECK(avg.provider_id == "AVERAGE");
    REQUIRE(avg.points.size() == 2);
    CHECK(avg.points[0].corr.r == doctest::Approx(0.3));
    CHECK(avg.points[1].corr.r == doctest::Approx(0.7));
    CHECK(avg.points[0].corr.n == 10);

    CorrelationCurve mismatched{"p", "m", "P3", {{0.2, {.r = 0.4, .n = 12}}}};
    CHECK_THROWS_AS(average_curve({a, mismatched}), DataError);
}

TEST_CASE("agreement_matrix: identical sources correlate perfectly") {
    std::map<std::string, double> s1 = {{"a", 3}, {"b", 7}, {"c", 5}, {"d", 9}};
    std::map<std::string, double> s2 = s1;
    std::map<std::string, double> s3 = {{"a", 4}, {"b", 6}, {"c", 5}, {"d", 8}};
    auto res = agreement_matrix({{"r1", s1}, {"r2", s2}, {"r3", s3}});
    CHECK(res.n_common == 4);
    CHECK(res.pairwise.size() == 3);
    CHECK(std::get<2>(res.pairwise[0]).r == doctest::Approx(1.0));  // r1 vs r2
    CHECK(res.icc_2_1.value > 0.8);

    std::map<std::string, double> disjoint = {{"x", 1}, {"y", 2}, {"z", 3}};
    CHECK_THROWS_AS(agreement_matrix({{"r1", s1}, {"r4", disjoint}}), DataError);
}

TEST_CASE("cross_source_correlation: intersection semantics") {
    std::map<std::string, double> human = {{"a", 3}, {"b", 7}, {"c", 5}, {"d", 9}, {"x", 1}};
    std::map<std::string, double> llm = {{"a", 3}, {"b", 7}, {"c", 5}, {"d", 9}, {"y", 2}};
    auto res = cross_source_correlation(human, llm);
    CHECK(res.n == 4);
    CHECK(res.r == doctest::Approx(1.0));

    std::map<std::string, double> anti;
    for (const auto& [id, v] : human) anti[id] = 12.0 - v;
    CHECK(cross_source_correlation(human, anti).r == doctest::Approx(-1.0));

    std::map<std::string, double> tiny = {{"a", 1}, {"b", 2}};
    CHECK_THROWS_AS(cross_source_correlation(tiny, llm), DataError);
}

TEST_CASE("part-to-whole shape: quality-signal mock rises with slice thickness") {
    // Deterministic end-to-end property at library level with a small corpus.
    test_util::TempDir dir("shape");
    test_util::make_synthetic_corpus(dir.path(), 64, 101, 500, 1500);
    auto corpus = load_corpus(dir.path(), 50);

    std::vector<SliceSpec> grid;
    for (double f : default_fraction_grid()) grid.push_back(SliceSpec::fraction(f));

    MockOptions opts;
    opts.seed = 7;
    opts.mode = MockMode::QualitySignal;
    std::vector<ProviderRun> providers;
    providers.push_back({std::make_shared<MockProvider>("mock", "m1", opts), 1, 2, 0.0});

    auto result = run_matrix(corpus, grid, builtin_prompts(), providers, nullptr);
    std::vector<CorrelationCurve> curves;
    for (const auto& p : builtin_prompts()) {
        curves.push_back(part_to_whole_curve(result.table, "mock", "m1", p.prompt_id));
    }
    auto avg = average_curve(curves);
    REQUIRE(avg.points.size() == 8);
    for (size_t i = 1; i < avg.points.size(); ++i) {
        CHECK(avg.points[i].corr.r >= avg.points[i - 1].corr.r - 1e-12);
    }
    CHECK(avg.points.back().corr.r > 0.9);
}
