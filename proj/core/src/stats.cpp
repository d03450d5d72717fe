#include "thinslice/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "thinslice/errors.hpp"

namespace thinslice {

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-14;
    constexpr int kMaxIter = 500;

    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw DataError("incomplete beta continued fraction did not converge");
}

void fill_significance(CorrelationResult& res) {
    res.df = res.n - 2;
    if (std::fabs(res.r) >= 1.0 - 1e-15) {
        res.t_stat = res.r > 0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
        res.p_two_tailed = 0.0;
        res.p_one_tailed = res.r > 0 ? 0.0 : 1.0;
        return;
    }
    res.t_stat = t_statistic(res.r, res.n);
    double x = res.df / (res.df + res.t_stat * res.t_stat);
    res.p_two_tailed = regularized_incomplete_beta(res.df / 2.0, 0.5, x);
    res.p_one_tailed =
        res.t_stat >= 0 ? res.p_two_tailed / 2.0 : 1.0 - res.p_two_tailed / 2.0;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw DataError("incomplete beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                      b * std::log(1.0 - x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * betacf(a, b, x) / a;
    }
    return 1.0 - std::exp(ln_front) * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, int df) {
    if (df < 1) throw DataError("student_t_cdf: df must be >= 1");
    if (t == 0.0) return 0.5;
    double x = df / (df + t * t);
    double two_tail = regularized_incomplete_beta(df / 2.0, 0.5, x);
    return t > 0 ? 1.0 - two_tail / 2.0 : two_tail / 2.0;
}

double student_t_quantile(double p, int df) {
    if (!(p > 0.0 && p < 1.0)) throw DataError("student_t_quantile: p outside (0,1)");
    if (p == 0.5) return 0.0;
    double lo = -1e8, hi = 1e8;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12 * std::max(1.0, std::fabs(lo))) break;
    }
    return 0.5 * (lo + hi);
}

double t_statistic(double r, int n) {
    if (n < 3) throw DataError("t_statistic: n must be >= 3");
    if (std::fabs(r) >= 1.0) throw DataError("t_statistic: |r| must be < 1");
    return r * std::sqrt(static_cast<double>(n - 2)) / std::sqrt(1.0 - r * r);
}

double critical_r(int n, double alpha, Tails tails) {
    if (n < 4) throw DataError("critical_r: n must be >= 4");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("critical_r: alpha outside (0,1)");
    int df = n - 2;
    double tail = tails == Tails::One ? alpha : alpha / 2.0;
    double t = student_t_quantile(1.0 - tail, df);
    return t / std::sqrt(t * t + df);
}

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("pearson: length mismatch");
    auto n = x.size();
    if (n < 3) throw DataError("pearson: too few pairs (n < 3)");

    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw DataError("pearson: degenerate variance (constant vector)");
    }

    CorrelationResult res;
    res.n = static_cast<int>(n);
    res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    fill_significance(res);
    return res;
}

IccResult icc(const std::vector<std::vector<double>>& matrix, IccForm form) {
    auto n = matrix.size();
    if (n < 2) throw DataError("icc: need at least 2 targets");
    auto k = matrix[0].size();
    if (k < 2) throw DataError("icc: need at least 2 raters");
    for (const auto& row : matrix) {
        if (row.size() != k) throw DataError("icc: ragged matrix");
    }
    double dn = static_cast<double>(n), dk = static_cast<double>(k);

    double grand = 0.0;
    std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) {
            grand += matrix[i][j];
            row_mean[i] += matrix[i][j];
            col_mean[j] += matrix[i][j];
        }
    }
    grand /= dn * dk;
    for (auto& m : row_mean) m /= dk;
    for (auto& m : col_mean) m /= dn;

    double ss_rows = 0.0, ss_cols = 0.0, ss_total = 0.0;
    for (size_t i = 0; i < n; ++i) ss_rows += (row_mean[i] - grand) * (row_mean[i] - grand);
    ss_rows *= dk;
    for (size_t j = 0; j < k; ++j) ss_cols += (col_mean[j] - grand) * (col_mean[j] - grand);
    ss_cols *= dn;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) {
            ss_total += (matrix[i][j] - grand) * (matrix[i][j] - grand);
        }
    }
    double ss_error = ss_total - ss_rows - ss_cols;

    IccResult res;
    res.form = form;
    res.ms_rows = ss_rows / (dn - 1.0);
    res.ms_cols = ss_cols / (dk - 1.0);
    res.ms_error = std::max(0.0, ss_error) / ((dn - 1.0) * (dk - 1.0));
    res.n_targets = static_cast<int>(n);
    res.k_raters = static_cast<int>(k);

    if (res.ms_rows == 0.0 && res.ms_error == 0.0) {
        throw DataError("icc: degenerate variance (constant matrix)");
    }
    double num = res.ms_rows - res.ms_error;
    double denom = form == IccForm::ICC_2_1
                       ? res.ms_rows + (dk - 1.0) * res.ms_error +
                             (dk / dn) * (res.ms_cols - res.ms_error)
                       : res.ms_rows + (res.ms_cols - res.ms_error) / dn;
    if (denom == 0.0) throw DataError("icc: degenerate variance (zero denominator)");
    res.value = num / denom;
    return res;
}

bool RatingFilter::matches(const RatingRecord& r) const {
    if (provider_id && r.provider_id != *provider_id) return false;
    if (model_name && r.model_name != *model_name) return false;
    if (prompt_id && r.prompt_id != *prompt_id) return false;
    if (spec && !(r.spec == *spec)) return false;
    return true;
}

GroupAverages group_average(const RatingsTable& table, const RatingFilter& filter) {
    std::map<std::string, std::pair<double, int>> sums;  // speech -> (sum, count)
    std::set<std::string> seen;
    for (const auto& rec : table.records) {
        if (!filter.matches(rec)) continue;
        seen.insert(rec.speech_id);
        if (rec.rating) {
            auto& [sum, count] = sums[rec.speech_id];
            sum += *rec.rating;
            ++count;
        }
    }
    GroupAverages out;
    for (const auto& id : seen) {
        auto it = sums.find(id);
        if (it == sums.end()) {
            out.all_missing_ids.push_back(id);
        } else {
            out.means[id] = it->second.first / it->second.second;
        }
    }
    return out;
}

CorrelationCurve part_to_whole_curve(const RatingsTable& table, const std::string& provider_id,
                                     const std::string& model_name,
                                     const std::string& prompt_id) {
    RatingFilter base;
    base.provider_id = provider_id;
    base.model_name = model_name;
    base.prompt_id = prompt_id;

    // speech -> fraction -> rating (missing cells skipped)
    std::map<std::string, std::map<double, int>> cells;
    std::set<double> fractions;
    for (const auto& rec : table.records) {
        if (!base.matches(rec) || rec.spec.kind != SliceKind::Fraction) continue;
        fractions.insert(rec.spec.value);
        if (rec.rating) cells[rec.speech_id][rec.spec.value] = *rec.rating;
    }
    if (!fractions.count(1.0)) {
        throw DataError("part_to_whole_curve: no full-speech (fraction 1.0) ratings for " +
                        provider_id + "/" + model_name + "/" + prompt_id);
    }

    CorrelationCurve curve;
    curve.provider_id = provider_id;
    curve.model_name = model_name;
    curve.prompt_id = prompt_id;
    for (double f : fractions) {
        if (f == 1.0) continue;
        std::vector<double> part, whole;
        for (const auto& [speech, by_fraction] : cells) {
            auto ps = by_fraction.find(f);
            auto ws = by_fraction.find(1.0);
            if (ps != by_fraction.end() && ws != by_fraction.end()) {
                part.push_back(ps->second);
                whole.push_back(ws->second);
            }
        }
        if (part.size() < 3) {
            throw DataError("part_to_whole_curve: too few complete pairs at fraction " +
                            std::to_string(f));
        }
        curve.points.push_back({f, pearson(part, whole)});
    }
    return curve;
}

CorrelationCurve average_curve(const std::vector<CorrelationCurve>& curves) {
    if (curves.empty()) throw DataError("average_curve: no input curves");
    const auto& first = curves.front();
    CorrelationCurve avg;
    avg.provider_id = avg.model_name = avg.prompt_id = "AVERAGE";
    for (size_t p = 0; p < first.points.size(); ++p) {
        double f = first.points[p].fraction;
        double sum_r = 0.0;
        int min_n = std::numeric_limits<int>::max();
        for (const auto& c : curves) {
            if (c.points.size() != first.points.size() || c.points[p].fraction != f) {
                throw DataError("average_curve: fraction grids differ across curves");
            }
            sum_r += c.points[p].corr.r;
            min_n = std::min(min_n, c.points[p].corr.n);
        }
        CorrelationResult res;
        res.r = sum_r / static_cast<double>(curves.size());
        res.n = min_n;
        fill_significance(res);
        avg.points.push_back({f, res});
    }
    return avg;
}

AgreementResult agreement_matrix(
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& sources) {
    if (sources.size() < 2) throw DataError("agreement_matrix: need at least 2 sources");

    std::vector<std::string> common;
    for (const auto& [id, _] : sources.front().second) common.push_back(id);
    for (size_t s = 1; s < sources.size(); ++s) {
        std::erase_if(common, [&](const std::string& id) {
            return !sources[s].second.count(id);
        });
    }
    if (common.size() < 3) {
        throw DataError("agreement_matrix: too few common speeches across sources");
    }

    std::vector<std::vector<double>> matrix(common.size(),
                                            std::vector<double>(sources.size()));
    for (size_t i = 0; i < common.size(); ++i) {
        for (size_t j = 0; j < sources.size(); ++j) {
            matrix[i][j] = sources[j].second.at(common[i]);
        }
    }

    AgreementResult out;
    out.n_common = static_cast<int>(common.size());
    out.icc_2_1 = icc(matrix, IccForm::ICC_2_1);
    out.icc_2_k = icc(matrix, IccForm::ICC_2_k);
    for (size_t a = 0; a < sources.size(); ++a) {
        for (size_t b = a + 1; b < sources.size(); ++b) {
            std::vector<double> va(common.size()), vb(common.size());
            for (size_t i = 0; i < common.size(); ++i) {
                va[i] = matrix[i][a];
                vb[i] = matrix[i][b];
            }
            out.pairwise.emplace_back(sources[a].first, sources[b].first, pearson(va, vb));
        }
    }
    return out;
}

CorrelationResult cross_source_correlation(const std::map<std::string, double>& a,
                                           const std::map<std::string, double>& b) {
    std::vector<double> va, vb;
    for (const auto& [id, value] : a) {
        auto it = b.find(id);
        if (it != b.end()) {
            va.push_back(value);
            vb.push_back(it->second);
        }
    }
    if (va.size() < 3) throw DataError("cross_source_correlation: too few shared speeches");
    return pearson(va, vb);
}

}  // namespace thinslice
