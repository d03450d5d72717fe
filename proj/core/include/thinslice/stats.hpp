#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "thinslice/evaluator.hpp"

namespace thinslice {

enum class Tails { One, Two };

struct CorrelationResult {
    double r = 0.0;
    int n = 0;
    double t_stat = 0.0;
    int df = 0;  // n - 2
    double p_one_tailed = 1.0;
    double p_two_tailed = 1.0;
};

/// Product-moment correlation with t-based significance. Requires equal
/// lengths, n >= 3, nonzero variance in both vectors.
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

/// t = r * sqrt(n-2) / sqrt(1-r^2). Throws DataError for |r| >= 1 or n < 3.
double t_statistic(double r, int n);

/// Regularized incomplete beta I_x(a,b), relative error < 1e-10.
double regularized_incomplete_beta(double a, double b, double x);

/// Lower-tail CDF of Student's t with df degrees of freedom.
double student_t_cdf(double t, int df);

/// Lower-tail quantile, by bisection on the CDF.
double student_t_quantile(double p, int df);

/// Smallest r >= 0 significant at alpha for the given tails, n >= 4.
double critical_r(int n, double alpha, Tails tails);

enum class IccForm { ICC_2_1, ICC_2_k };

struct IccResult {
    IccForm form = IccForm::ICC_2_1;
    double value = 0.0;
    double ms_rows = 0.0;   // between-targets mean square
    double ms_cols = 0.0;   // between-raters mean square
    double ms_error = 0.0;  // residual mean square
    int n_targets = 0;
    int k_raters = 0;
};

/// Two-way random-effects intraclass correlation over a complete
/// targets x raters matrix.
///   ICC(2,1) = (MSr - MSe) / (MSr + (k-1) MSe + (k/n)(MSc - MSe))
///   ICC(2,k) = (MSr - MSe) / (MSr + (MSc - MSe)/n)
IccResult icc(const std::vector<std::vector<double>>& matrix, IccForm form);

/// Selects table cells; unset fields match everything.
struct RatingFilter {
    std::optional<std::string> provider_id;
    std::optional<std::string> model_name;
    std::optional<std::string> prompt_id;
    std::optional<SliceSpec> spec;

    bool matches(const RatingRecord& r) const;
};

struct GroupAverages {
    std::map<std::string, double> means;       // speech_id -> mean rating
    std::vector<std::string> all_missing_ids;  // excluded speeches
};

/// Mean of non-missing ratings per speech within the filtered group.
GroupAverages group_average(const RatingsTable& table, const RatingFilter& filter);

struct CurvePoint {
    double fraction = 0.0;
    CorrelationResult corr;
};

struct CorrelationCurve {
    std::string provider_id;  // "AVERAGE" for the grid-average curve
    std::string model_name;
    std::string prompt_id;
    std::vector<CurvePoint> points;  // fractions strictly ascending, < 1.0
};

/// Pearson r between slice ratings and full-speech (fraction 1.0) ratings
/// across speeches, per fraction, with pairwise deletion of missing cells.
CorrelationCurve part_to_whole_curve(const RatingsTable& table, const std::string& provider_id,
                                     const std::string& model_name, const std::string& prompt_id);

/// Mean of per-config r values per fraction (mean of correlations, not
/// correlation of means); n per point is the smallest n among the inputs.
CorrelationCurve average_curve(const std::vector<CorrelationCurve>& curves);

struct AgreementResult {
    IccResult icc_2_1;
    IccResult icc_2_k;
    std::vector<std::tuple<std::string, std::string, CorrelationResult>> pairwise;
    int n_common = 0;  // speeches shared by all sources (listwise)
};

/// Treat each named per-speech rating map as one rater; intersect speech
/// sets, then compute both ICC forms plus all pairwise correlations.
AgreementResult agreement_matrix(
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& sources);

/// Pearson over the intersection of the two speech-id sets.
CorrelationResult cross_source_correlation(const std::map<std::string, double>& a,
                                           const std::map<std::string, double>& b);

}  // namespace thinslice
