#pragma once

// Spectrum measurement ingestion: CSV parsing, per-position datasets and
// per-adapter summary tables.

#include "som_emission/detail/numeric_format.hpp"
#include "som_emission/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace som_emission {

enum class MeasurementPosition { Top, Bottom, Left30, Right30, Up30, Down30 };

inline constexpr std::array<MeasurementPosition, 6> kAllPositions = {
    MeasurementPosition::Top,    MeasurementPosition::Bottom, MeasurementPosition::Left30,
    MeasurementPosition::Right30, MeasurementPosition::Up30,  MeasurementPosition::Down30,
};

inline std::string_view to_token(MeasurementPosition p) noexcept {
    switch (p) {
    case MeasurementPosition::Top: return "top";
    case MeasurementPosition::Bottom: return "bottom";
    case MeasurementPosition::Left30: return "left30";
    case MeasurementPosition::Right30: return "right30";
    case MeasurementPosition::Up30: return "up30";
    case MeasurementPosition::Down30: return "down30";
    }
    return "top";
}

/// Case-insensitive; returns nullopt for anything outside the six tokens.
inline std::optional<MeasurementPosition> parse_position(std::string_view token) {
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (auto p : kAllPositions) {
        if (to_token(p) == lower) return p;
    }
    return std::nullopt;
}

struct SpectrumSample {
    std::string adapter_id;
    MeasurementPosition position = MeasurementPosition::Top;
    double frequency_hz = 0.0;
    std::int64_t timestamp_ms = 0;
    double b_total_ut = 0.0;
    std::optional<double> b_x_ut;
    std::optional<double> b_y_ut;
    std::optional<double> b_z_ut;

    friend bool operator==(const SpectrumSample&, const SpectrumSample&) = default;
};

struct EmissionInstance {
    std::string adapter_id;
    double frequency_hz = 0.0;
    double b_mean_ut = 0.0;

    friend bool operator==(const EmissionInstance&, const EmissionInstance&) = default;
};

struct FrequencyBand {
    double f_min_hz = 0.0;
    double f_max_hz = 0.0;

    friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;
};

struct EmissionDataset {
    MeasurementPosition position = MeasurementPosition::Top;
    std::vector<EmissionInstance> instances;  // sorted by (adapter_id, frequency)
    FrequencyBand frequency_band;

    std::size_t size() const noexcept { return instances.size(); }
    bool empty() const noexcept { return instances.empty(); }

    /// One single-feature vector (b_mean) per instance, in instance order.
    std::vector<std::vector<double>> features() const {
        std::vector<std::vector<double>> out;
        out.reserve(instances.size());
        for (const auto& inst : instances) out.push_back({inst.b_mean_ut});
        return out;
    }

    friend bool operator==(const EmissionDataset&, const EmissionDataset&) = default;
};

struct PositionStats {
    double b_mean_ut = 0.0;
    double b_max_ut = 0.0;

    friend bool operator==(const PositionStats&, const PositionStats&) = default;
};

struct AdapterSummary {
    std::string adapter_id;
    std::map<MeasurementPosition, PositionStats> per_position;

    friend bool operator==(const AdapterSummary&, const AdapterSummary&) = default;
};

inline constexpr std::string_view kSpectrumCsvHeader =
    "adapter_id,position,frequency_hz,timestamp_ms,b_total_ut,b_x_ut,b_y_ut,b_z_ut";

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Sum after sorting so the result does not depend on input order.
inline double order_independent_mean(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace detail

/// Parses the measurement CSV. Aborts on the first offending row.
inline std::vector<SpectrumSample> parse_spectrum_csv(std::string_view content) {
    constexpr std::array<std::string_view, 8> columns = {
        "adapter_id", "position", "frequency_hz", "timestamp_ms",
        "b_total_ut", "b_x_ut",   "b_y_ut",       "b_z_ut"};

    std::vector<SpectrumSample> samples;
    std::size_t row = 0;
    bool header_seen = false;
    std::size_t pos = 0;

    while (pos < content.size()) {
        auto eol = content.find('\n', pos);
        std::string_view line = content.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? content.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++row;

        if (!header_seen) {
            if (line != kSpectrumCsvHeader) {
                throw Error(ErrorKind::MissingHeader, "expected header '" + std::string(kSpectrumCsvHeader) + "'", row);
            }
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;

        auto fields = detail::split_fields(line);
        if (fields.size() != columns.size()) {
            throw Error(ErrorKind::MalformedRow,
                        "expected 8 fields, found " + std::to_string(fields.size()), row);
        }

        SpectrumSample s;
        if (fields[0].empty()) throw Error(ErrorKind::MalformedRow, "empty adapter_id", row, "adapter_id");
        s.adapter_id = std::string(fields[0]);

        auto position = parse_position(fields[1]);
        if (!position) throw Error(ErrorKind::UnknownPosition, "'" + std::string(fields[1]) + "'", row, "position");
        s.position = *position;

        auto number = [&](std::size_t col) {
            auto v = detail::parse_double(fields[col]);
            if (!v) throw Error(ErrorKind::NonNumericField, "'" + std::string(fields[col]) + "'", row, std::string(columns[col]));
            return *v;
        };

        s.frequency_hz = number(2);
        if (s.frequency_hz <= 0.0) throw Error(ErrorKind::NonPositiveFrequency, "", row, "frequency_hz");

        auto ts = detail::parse_int64(fields[3]);
        if (!ts) throw Error(ErrorKind::NonNumericField, "'" + std::string(fields[3]) + "'", row, "timestamp_ms");
        s.timestamp_ms = *ts;

        s.b_total_ut = number(4);
        if (s.b_total_ut < 0.0) throw Error(ErrorKind::NegativeField, "b_total_ut must be >= 0", row, "b_total_ut");

        std::array<std::optional<double>*, 3> components = {&s.b_x_ut, &s.b_y_ut, &s.b_z_ut};
        for (std::size_t c = 0; c < 3; ++c) {
            if (!fields[5 + c].empty()) *components[c] = number(5 + c);
        }
        samples.push_back(std::move(s));
    }

    if (!header_seen) throw Error(ErrorKind::MissingHeader, "input is empty", 1);
    return samples;
}

/// Inverse of parse_spectrum_csv; numbers are written in shortest exact form.
inline std::string write_spectrum_csv(std::span<const SpectrumSample> samples) {
    std::string out(kSpectrumCsvHeader);
    out += '\n';
    auto opt = [](const std::optional<double>& v) { return v ? detail::format_exact(*v) : std::string(); };
    for (const auto& s : samples) {
        out += s.adapter_id;
        out += ',';
        out += to_token(s.position);
        out += ',';
        out += detail::format_exact(s.frequency_hz);
        out += ',';
        out += std::to_string(s.timestamp_ms);
        out += ',';
        out += detail::format_exact(s.b_total_ut);
        out += ',' + opt(s.b_x_ut) + ',' + opt(s.b_y_ut) + ',' + opt(s.b_z_ut) + '\n';
    }
    return out;
}

/// Averages b_total over time for every (adapter, frequency) at one position.
inline EmissionDataset build_dataset(std::span<const SpectrumSample> samples, MeasurementPosition position) {
    std::map<std::pair<std::string, double>, std::vector<double>> groups;
    for (const auto& s : samples) {
        if (s.position == position) groups[{s.adapter_id, s.frequency_hz}].push_back(s.b_total_ut);
    }
    if (groups.empty()) {
        throw Error(ErrorKind::EmptyPosition, "no samples at position '" + std::string(to_token(position)) + "'");
    }

    EmissionDataset ds;
    ds.position = position;
    ds.instances.reserve(groups.size());
    ds.frequency_band = {groups.begin()->first.second, groups.begin()->first.second};
    for (auto& [key, values] : groups) {
        ds.instances.push_back({key.first, key.second, detail::order_independent_mean(std::move(values))});
        ds.frequency_band.f_min_hz = std::min(ds.frequency_band.f_min_hz, key.second);
        ds.frequency_band.f_max_hz = std::max(ds.frequency_band.f_max_hz, key.second);
    }
    return ds;
}

/// Mean and maximum of b_total per adapter and position, over all
/// frequencies and timestamps. Adapters come out sorted by id.
inline std::vector<AdapterSummary> summarize_adapters(std::span<const SpectrumSample> samples) {
    std::map<std::string, std::map<MeasurementPosition, std::vector<double>>> grouped;
    for (const auto& s : samples) grouped[s.adapter_id][s.position].push_back(s.b_total_ut);

    std::vector<AdapterSummary> out;
    out.reserve(grouped.size());
    for (auto& [adapter, by_position] : grouped) {
        AdapterSummary summary{adapter, {}};
        for (auto& [position, values] : by_position) {
            double max = *std::max_element(values.begin(), values.end());
            summary.per_position[position] = {detail::order_independent_mean(std::move(values)), max};
        }
        out.push_back(std::move(summary));
    }
    return out;
}

}  // namespace som_emission
