#include "thinslice/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "thinslice/csv.hpp"
#include "thinslice/errors.hpp"

namespace thinslice {

namespace {

std::string num(double v, int decimals = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string frac_repr(double f) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", f);
    return buf;
}

}  // namespace

std::string format_r(double value) {
    // Half-up at the 2nd decimal; the epsilon absorbs binary representation
    // error so e.g. 0.145 (stored as 14.4999...e-2) still rounds up.
    double scaled = std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", scaled);
    return buf;
}

SliceThicknessTable render_slice_table(const std::vector<CorrelationCurve>& curves) {
    if (curves.empty()) throw DataError("render_slice_table: no curves");

    SliceThicknessTable table;
    for (const auto& p : curves.front().points) {
        if (p.fraction < 1.0) table.fractions.push_back(p.fraction);
    }

    for (const auto& c : curves) {
        SliceThicknessTable::Row row;
        row.model = c.model_name;
        row.prompt = c.prompt_id;
        for (const auto& p : c.points) {
            if (p.fraction >= 1.0) continue;
            row.r.push_back(p.corr.r);
        }
        if (row.r.size() != table.fractions.size()) {
            throw DataError("render_slice_table: fraction grids differ across curves");
        }
        for (size_t i = 0, j = 0; i < c.points.size(); ++i) {
            if (c.points[i].fraction >= 1.0) continue;
            if (c.points[i].fraction != table.fractions[j++]) {
                throw DataError("render_slice_table: fraction grids differ across curves");
            }
        }
        table.rows.push_back(std::move(row));
    }

    table.average_row.assign(table.fractions.size(), 0.0);
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.r.size(); ++i) table.average_row[i] += row.r[i];
    }
    for (auto& v : table.average_row) v /= static_cast<double>(table.rows.size());
    return table;
}

void write_slice_table_csv(const SliceThicknessTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write table: " + path.string());
    std::vector<std::string> header = {"model", "prompt"};
    for (double f : table.fractions) header.push_back(frac_repr(f));
    out << csv::join_row(header) << "\n";
    for (const auto& row : table.rows) {
        std::vector<std::string> fields = {row.model, row.prompt};
        for (double r : row.r) fields.push_back(num(r, 6));
        out << csv::join_row(fields) << "\n";
    }
    std::vector<std::string> avg = {"Average", ""};
    for (double r : table.average_row) avg.push_back(num(r, 6));
    out << csv::join_row(avg) << "\n";
}

SliceThicknessTable read_slice_table_csv(const std::filesystem::path& path) {
    auto rows = csv::read_file(path);
    if (rows.size() < 3 || rows[0].size() < 3) {
        throw DataError("malformed slice table: " + path.string());
    }
    SliceThicknessTable table;
    for (size_t i = 2; i < rows[0].size(); ++i) table.fractions.push_back(std::stod(rows[0][i]));
    for (size_t i = 1; i < rows.size(); ++i) {
        const auto& fields = rows[i];
        if (fields.size() != table.fractions.size() + 2) {
            throw DataError("malformed slice table row in " + path.string());
        }
        if (fields[0] == "Average") {
            for (size_t j = 2; j < fields.size(); ++j) {
                table.average_row.push_back(std::stod(fields[j]));
            }
            continue;
        }
        SliceThicknessTable::Row row;
        row.model = fields[0];
        row.prompt = fields[1];
        for (size_t j = 2; j < fields.size(); ++j) row.r.push_back(std::stod(fields[j]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_slice_table_text(const SliceThicknessTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write table: " + path.string());

    size_t model_w = 7, prompt_w = 6;
    for (const auto& row : table.rows) {
        model_w = std::max(model_w, row.model.size());
        prompt_w = std::max(prompt_w, row.prompt.size());
    }

    auto pad = [](const std::string& s, size_t w) {
        return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
    };

    out << pad("Model", model_w) << "  " << pad("Prompt", prompt_w);
    for (double f : table.fractions) out << "  " << pad(frac_repr(f), 5);
    out << "\n";
    for (const auto& row : table.rows) {
        out << pad(row.model, model_w) << "  " << pad(row.prompt, prompt_w);
        for (double r : row.r) out << "  " << pad(format_r(r), 5);
        out << "\n";
    }
    out << pad("Average", model_w) << "  " << pad("", prompt_w);
    for (double r : table.average_row) out << "  " << pad(format_r(r), 5);
    out << "\n";
}

void write_curve_plot_svg(const std::vector<CorrelationCurve>& curves, Band band,
                          double threshold_r, const std::filesystem::path& path) {
    if (curves.empty()) throw DataError("write_curve_plot_svg: no curves");

    constexpr double W = 760, H = 480;
    constexpr double ML = 70, MR = 30, MT = 40, MB = 60;
    const double plot_w = W - ML - MR, plot_h = H - MT - MB;

    double fmax = 0.0;
    for (const auto& p : curves.front().points) fmax = std::max(fmax, p.fraction);
    auto sx = [&](double f) { return ML + plot_w * f / fmax; };
    auto sy = [&](double r) {
        double clamped = std::clamp(r, 0.0, 1.0);
        return MT + plot_h * (1.0 - clamped);
    };

    // Group curves by model family; the band spans the prompts of one model.
    std::map<std::string, std::vector<const CorrelationCurve*>> by_model;
    for (const auto& c : curves) by_model[c.model_name].push_back(&c);

    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // Axes
    svg << "<line x1=\"" << ML << "\" y1=\"" << MT + plot_h << "\" x2=\"" << ML + plot_w
        << "\" y2=\"" << MT + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\""
        << MT + plot_h << "\" stroke=\"black\"/>\n";
    for (const auto& p : curves.front().points) {
        double x = sx(p.fraction);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << MT + plot_h << "\" x2=\"" << num(x)
            << "\" y2=\"" << MT + plot_h + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << MT + plot_h + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << frac_repr(p.fraction)
            << "</text>\n";
    }
    for (int i = 0; i <= 10; i += 2) {
        double r = i / 10.0;
        svg << "<line x1=\"" << ML - 5 << "\" y1=\"" << num(sy(r)) << "\" x2=\"" << ML
            << "\" y2=\"" << num(sy(r)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ML - 10 << "\" y=\"" << num(sy(r) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << frac_repr(r) << "</text>\n";
    }
    svg << "<text x=\"" << ML + plot_w / 2 << "\" y=\"" << H - 15
        << "\" font-size=\"13\" text-anchor=\"middle\">Slice thickness (fraction of "
           "speech)</text>\n";
    svg << "<text x=\"18\" y=\"" << MT + plot_h / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << MT + plot_h / 2 << ")\">Part-to-whole correlation (r)</text>\n";

    int color_idx = 0;
    double legend_y = MT + 10;
    for (const auto& [model, model_curves] : by_model) {
        const char* color = kColors[color_idx++ % 6];
        size_t npts = model_curves.front()->points.size();
        std::vector<double> mean(npts, 0.0), lo(npts), hi(npts);
        for (size_t i = 0; i < npts; ++i) {
            double sum = 0.0, sum2 = 0.0;
            double vmin = 2.0, vmax = -2.0;
            for (const auto* c : model_curves) {
                double r = c->points[i].corr.r;
                sum += r;
                sum2 += r * r;
                vmin = std::min(vmin, r);
                vmax = std::max(vmax, r);
            }
            double m = sum / model_curves.size();
            mean[i] = m;
            if (band == Band::MinMax) {
                lo[i] = vmin;
                hi[i] = vmax;
            } else {
                double var = model_curves.size() > 1
                                 ? (sum2 - model_curves.size() * m * m) /
                                       (model_curves.size() - 1.0)
                                 : 0.0;
                double sd = std::sqrt(std::max(0.0, var));
                lo[i] = m - sd;
                hi[i] = m + sd;
            }
        }

        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" "
            << "points=\"";
        for (size_t i = 0; i < npts; ++i) {
            svg << num(sx(model_curves.front()->points[i].fraction)) << "," << num(sy(hi[i]))
                << " ";
        }
        for (size_t i = npts; i-- > 0;) {
            svg << num(sx(model_curves.front()->points[i].fraction)) << "," << num(sy(lo[i]))
                << " ";
        }
        svg << "\"/>\n";

        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (size_t i = 0; i < npts; ++i) {
            svg << num(sx(model_curves.front()->points[i].fraction)) << "," << num(sy(mean[i]))
                << " ";
        }
        svg << "\"/>\n";

        svg << "<rect x=\"" << ML + plot_w - 150 << "\" y=\"" << num(legend_y - 9)
            << "\" width=\"18\" height=\"10\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << ML + plot_w - 126 << "\" y=\"" << num(legend_y)
            << "\" font-size=\"12\">" << model << "</text>\n";
        legend_y += 18;
    }

    svg << "<line x1=\"" << ML << "\" y1=\"" << num(sy(threshold_r)) << "\" x2=\""
        << ML + plot_w << "\" y2=\"" << num(sy(threshold_r))
        << "\" stroke=\"#555555\" stroke-dasharray=\"6,4\"/>\n";
    svg << "<text x=\"" << ML + 6 << "\" y=\"" << num(sy(threshold_r) - 6)
        << "\" font-size=\"11\" fill=\"#555555\">significance threshold r = "
        << format_r(threshold_r) << "</text>\n";

    svg << "</svg>\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write plot: " + path.string());
    out << svg.str();
}

}  // namespace thinslice
