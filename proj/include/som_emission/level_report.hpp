#pragma once

// Ordered emission levels, per-position level tables with safety flags, and
// per-adapter spectrum plot data.

#include "som_emission/detail/numeric_format.hpp"
#include "som_emission/error.hpp"
#include "som_emission/som.hpp"
#include "som_emission/spectrum.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace som_emission {

inline constexpr double kTcoLimitUt = 0.2;

/// Rank of a level among `count` ascending levels. With five levels the
/// ranks are named very low, low, middle, high, very high.
struct EmissionLevel {
    std::size_t rank = 0;
    std::size_t count = 5;

    std::string name() const {
        static constexpr std::array<const char*, 5> names = {"very low", "low", "middle", "high", "very high"};
        if (count == names.size()) return names[rank];
        return "level " + std::to_string(rank);
    }

    friend auto operator<=>(const EmissionLevel&, const EmissionLevel&) = default;
};

inline constexpr std::size_t kVeryLow = 0;
inline constexpr std::size_t kLow = 1;
inline constexpr std::size_t kMiddle = 2;
inline constexpr std::size_t kHigh = 3;
inline constexpr std::size_t kVeryHigh = 4;

enum class Safety { Below, Borderline, Above };

inline std::string_view to_token(Safety s) noexcept {
    switch (s) {
    case Safety::Below: return "below";
    case Safety::Borderline: return "borderline";
    case Safety::Above: return "above";
    }
    return "below";
}

inline Safety classify_safety(double b_min, double b_max, double limit) noexcept {
    if (b_max <= limit) return Safety::Below;
    if (b_min > limit) return Safety::Above;
    return Safety::Borderline;
}

struct Interval {
    double min = 0.0;
    double max = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct LevelRow {
    EmissionLevel level;
    std::size_t member_count = 0;
    // Absent when the level has no members.
    std::optional<Interval> field_ut;
    std::optional<Interval> frequency_hz;
    std::optional<Safety> safety;

    friend bool operator==(const LevelRow&, const LevelRow&) = default;
};

struct LevelReport {
    MeasurementPosition position = MeasurementPosition::Top;
    double limit_ut = kTcoLimitUt;
    std::vector<LevelRow> rows;  // ascending level

    const LevelRow& row(std::size_t rank) const { return rows.at(rank); }

    friend bool operator==(const LevelReport&, const LevelReport&) = default;
};

/// level_of[i] is the level of cluster i: clusters ranked by ascending
/// prototype value, lower index first on ties.
inline std::vector<EmissionLevel> order_clusters(const SomNetwork& net) {
    if (net.dim() != 1) throw Error(ErrorKind::NotOneDimensional, "level ordering needs one-dimensional prototypes");
    std::vector<std::size_t> by_value(net.size());
    std::iota(by_value.begin(), by_value.end(), std::size_t{0});
    std::stable_sort(by_value.begin(), by_value.end(), [&](std::size_t a, std::size_t b) {
        return net.prototype(a)[0] < net.prototype(b)[0];
    });
    std::vector<EmissionLevel> level_of(net.size());
    for (std::size_t r = 0; r < by_value.size(); ++r) level_of[by_value[r]] = {r, net.size()};
    return level_of;
}

/// Table from any per-instance level labelling (SOM levels or binning labels).
inline LevelReport build_level_report_from_labels(const EmissionDataset& dataset, std::span<const std::size_t> levels,
                                                  std::size_t level_count, double limit_ut = kTcoLimitUt) {
    if (levels.size() != dataset.size()) throw Error(ErrorKind::DimensionMismatch, "one label per instance required");
    LevelReport report{dataset.position, limit_ut, {}};
    for (std::size_t r = 0; r < level_count; ++r) report.rows.push_back({{r, level_count}, 0, {}, {}, {}});

    for (std::size_t i = 0; i < dataset.size(); ++i) {
        if (levels[i] >= level_count) throw Error(ErrorKind::IndexOutOfRange, "label exceeds level count");
        const auto& inst = dataset.instances[i];
        auto& row = report.rows[levels[i]];
        if (row.member_count++ == 0) {
            row.field_ut = Interval{inst.b_mean_ut, inst.b_mean_ut};
            row.frequency_hz = Interval{inst.frequency_hz, inst.frequency_hz};
            continue;
        }
        row.field_ut->min = std::min(row.field_ut->min, inst.b_mean_ut);
        row.field_ut->max = std::max(row.field_ut->max, inst.b_mean_ut);
        row.frequency_hz->min = std::min(row.frequency_hz->min, inst.frequency_hz);
        row.frequency_hz->max = std::max(row.frequency_hz->max, inst.frequency_hz);
    }
    for (auto& row : report.rows) {
        if (row.field_ut) row.safety = classify_safety(row.field_ut->min, row.field_ut->max, limit_ut);
    }
    return report;
}

inline LevelReport build_level_report(const EmissionDataset& dataset, const SomNetwork& net,
                                      double limit_ut = kTcoLimitUt) {
    auto level_of = order_clusters(net);
    std::vector<std::size_t> levels;
    levels.reserve(dataset.size());
    for (const auto& inst : dataset.instances) {
        std::array<double, 1> x{inst.b_mean_ut};
        levels.push_back(level_of[classify(net, x)].rank);
    }
    return build_level_report_from_labels(dataset, levels, net.size(), limit_ut);
}

enum class ReportFormat { Markdown, Csv, Json };

namespace detail {

inline std::string markdown_report(const LevelReport& report) {
    std::string out = "### Emission levels at " + std::string(to_token(report.position)) + " (limit " +
                      format_exact(report.limit_ut) + " uT)\n\n";
    out += "| Level | B min [uT] | B max [uT] | f min [Hz] | f max [Hz] | Members | Safety |\n";
    out += "|---|---:|---:|---:|---:|---:|---|\n";
    // Values over the limit are bolded, the table's stand-in for colour marking.
    auto field = [&](double v) {
        auto s = format_fixed(v, 3);
        return v > report.limit_ut ? "**" + s + "**" : s;
    };
    for (const auto& row : report.rows) {
        out += "| " + row.level.name() + " | ";
        if (row.member_count == 0) {
            out += "- | - | - | - | 0 | - |\n";
            continue;
        }
        out += field(row.field_ut->min) + " | " + field(row.field_ut->max) + " | ";
        out += format_fixed(row.frequency_hz->min, 1) + " | " + format_fixed(row.frequency_hz->max, 1) + " | ";
        out += std::to_string(row.member_count) + " | " + std::string(to_token(*row.safety)) + " |\n";
    }
    return out;
}

inline std::string csv_report(const LevelReport& report) {
    std::string out = "position,limit_ut,level,rank,member_count,b_min_ut,b_max_ut,f_min_hz,f_max_hz,safety\n";
    for (const auto& row : report.rows) {
        out += std::string(to_token(report.position)) + ',' + format_exact(report.limit_ut) + ',' + row.level.name() +
               ',' + std::to_string(row.level.rank) + ',' + std::to_string(row.member_count) + ',';
        if (row.member_count == 0) {
            out += ",,,,\n";
            continue;
        }
        out += format_exact(row.field_ut->min) + ',' + format_exact(row.field_ut->max) + ',' +
               format_exact(row.frequency_hz->min) + ',' + format_exact(row.frequency_hz->max) + ',' +
               std::string(to_token(*row.safety)) + '\n';
    }
    return out;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const LevelReport& report) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["level"] = row.level.name();
        r["rank"] = row.level.rank;
        r["member_count"] = row.member_count;
        if (row.member_count > 0) {
            r["b_min_ut"] = row.field_ut->min;
            r["b_max_ut"] = row.field_ut->max;
            r["f_min_hz"] = row.frequency_hz->min;
            r["f_max_hz"] = row.frequency_hz->max;
            r["safety"] = to_token(*row.safety);
        }
        rows.push_back(std::move(r));
    }
    nlohmann::ordered_json j;
    j["position"] = to_token(report.position);
    j["limit_ut"] = report.limit_ut;
    j["rows"] = std::move(rows);
    return j;
}

/// Inverse of the JSON rendering.
inline LevelReport report_from_json(std::string_view text) {
    auto j = nlohmann::json::parse(text);
    LevelReport report;
    auto position = parse_position(j.at("position").get<std::string>());
    if (!position) throw Error(ErrorKind::UnknownPosition, j.at("position").get<std::string>());
    report.position = *position;
    report.limit_ut = j.at("limit_ut").get<double>();
    const auto& rows = j.at("rows");
    for (const auto& r : rows) {
        LevelRow row;
        row.level = {r.at("rank").get<std::size_t>(), rows.size()};
        row.member_count = r.at("member_count").get<std::size_t>();
        if (row.member_count > 0) {
            row.field_ut = Interval{r.at("b_min_ut").get<double>(), r.at("b_max_ut").get<double>()};
            row.frequency_hz = Interval{r.at("f_min_hz").get<double>(), r.at("f_max_hz").get<double>()};
            auto s = r.at("safety").get<std::string>();
            row.safety = s == "below" ? Safety::Below : s == "above" ? Safety::Above : Safety::Borderline;
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

inline std::string render_report(const LevelReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Markdown: return detail::markdown_report(report);
    case ReportFormat::Csv: return detail::csv_report(report);
    case ReportFormat::Json: return report_to_json(report).dump(2) + '\n';
    }
    return {};
}

struct SeriesPoint {
    double frequency_hz = 0.0;
    double value_ut = 0.0;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

using Series = std::vector<SeriesPoint>;

struct PlotData {
    Series first;
    Series second;
    Series difference;  // first - second, pointwise
};

/// Time-averaged spectra of one adapter at two positions and their difference.
inline PlotData emit_plot_data(std::span<const SpectrumSample> samples, const std::string& adapter_id,
                               MeasurementPosition first, MeasurementPosition second) {
    auto series_at = [&](MeasurementPosition p) {
        Series s;
        for (const auto& inst : build_dataset(samples, p).instances) {
            if (inst.adapter_id == adapter_id) s.push_back({inst.frequency_hz, inst.b_mean_ut});
        }
        if (s.empty()) {
            throw Error(ErrorKind::EmptyPosition,
                        "adapter '" + adapter_id + "' has no samples at '" + std::string(to_token(p)) + "'");
        }
        return s;
    };

    PlotData out{series_at(first), series_at(second), {}};
    if (out.first.size() != out.second.size()) throw Error(ErrorKind::GridMismatch, "frequency grids differ");
    for (std::size_t i = 0; i < out.first.size(); ++i) {
        if (out.first[i].frequency_hz != out.second[i].frequency_hz) {
            throw Error(ErrorKind::GridMismatch, "frequency grids differ");
        }
        out.difference.push_back({out.first[i].frequency_hz, out.first[i].value_ut - out.second[i].value_ut});
    }
    return out;
}

/// Whitespace-separated "frequency_hz value_ut" lines.
inline std::string render_series(const Series& series) {
    std::string out;
    for (const auto& p : series) out += detail::format_exact(p.frequency_hz) + ' ' + detail::format_exact(p.value_ut) + '\n';
    return out;
}

}  // namespace som_emission
