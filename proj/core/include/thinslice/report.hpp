#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thinslice/stats.hpp"

namespace thinslice {

enum class Band { MinMax, SD };

/// Slice-thickness table: one row per (model, prompt) configuration plus a
/// final Average row; the 1.0 column is omitted (r = 1 by definition).
struct SliceThicknessTable {
    struct Row {
        std::string model;
        std::string prompt;
        std::vector<double> r;  // one per fraction
    };
    std::vector<double> fractions;
    std::vector<Row> rows;
    std::vector<double> average_row;  // exact column means, unrounded
};

SliceThicknessTable render_slice_table(const std::vector<CorrelationCurve>& curves);

/// Half-up rounding to 2 decimals, as displayed.
std::string format_r(double value);

void write_slice_table_csv(const SliceThicknessTable& table, const std::filesystem::path& path);
void write_slice_table_text(const SliceThicknessTable& table, const std::filesystem::path& path);
SliceThicknessTable read_slice_table_csv(const std::filesystem::path& path);

/// Self-contained SVG: per-model mean line with a shaded prompt-variability
/// band, plus a dashed significance-threshold line at threshold_r.
void write_curve_plot_svg(const std::vector<CorrelationCurve>& curves, Band band,
                          double threshold_r, const std::filesystem::path& path);

}  // namespace thinslice
