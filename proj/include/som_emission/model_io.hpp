#pragma once

// Text model format:
//
//   som-model v1
//   # clusters=5
//   # ...other config keys...
//   0,w_1,...,w_n
//   1,w_1,...,w_n
//
// Weights are written in shortest round-trip form so save/load is exact.

#include "som_emission/detail/numeric_format.hpp"
#include "som_emission/error.hpp"
#include "som_emission/som.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace som_emission {

inline constexpr std::string_view kModelHeader = "som-model v1";

struct LoadedModel {
    SomNetwork network;
    std::map<std::string, std::string> config;  // echoed "# key=value" lines
};

inline std::string_view to_token(NeighborhoodKernel k) noexcept {
    return k == NeighborhoodKernel::Flat ? "flat" : "gaussian";
}

inline std::string_view to_token(InitMode m) noexcept {
    return m == InitMode::DataRange ? "data-range" : "small-random";
}

inline std::string save_model(const SomNetwork& net, const SomConfig& config) {
    std::string out(kModelHeader);
    out += '\n';
    auto kv = [&out](std::string_view key, const std::string& value) {
        out += "# ";
        out += key;
        out += '=';
        out += value;
        out += '\n';
    };
    kv("clusters", std::to_string(config.clusters));
    kv("input_dim", std::to_string(config.input_dim));
    kv("epochs", std::to_string(config.epochs));
    kv("ordering_steps", std::to_string(config.ordering_steps));
    kv("initial_radius", std::to_string(config.initial_radius));
    kv("eta_start", detail::format_exact(config.eta_start));
    kv("eta_floor", detail::format_exact(config.eta_floor));
    kv("seed", std::to_string(config.seed));
    kv("kernel", std::string(to_token(config.kernel)));
    kv("init", std::string(to_token(config.init)));

    for (std::size_t i = 0; i < net.size(); ++i) {
        out += std::to_string(i);
        for (double w : net.prototype(i)) {
            out += ',';
            out += detail::format_exact(w);
        }
        out += '\n';
    }
    return out;
}

inline LoadedModel load_model(std::string_view text) {
    LoadedModel model;
    std::vector<std::vector<double>> prototypes;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;

    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;

        if (!header_seen) {
            if (line != kModelHeader) throw Error(ErrorKind::ModelFormat, "missing 'som-model v1' header", line_no);
            header_seen = true;
            continue;
        }
        if (line.empty()) continue;
        if (line.front() == '#') {
            line.remove_prefix(1);
            while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            auto eq = line.find('=');
            if (eq != std::string_view::npos) {
                model.config[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
            }
            continue;
        }

        auto fields = detail::split_fields(line);
        auto index = detail::parse_uint64(fields.front());
        if (!index || *index != prototypes.size()) {
            throw Error(ErrorKind::ModelFormat, "neuron lines must be numbered 0..k-1 in order", line_no);
        }
        if (fields.size() < 2) throw Error(ErrorKind::ModelFormat, "neuron line without weights", line_no);
        std::vector<double> w;
        for (std::size_t f = 1; f < fields.size(); ++f) {
            auto v = detail::parse_double(fields[f]);
            if (!v) throw Error(ErrorKind::ModelFormat, "bad weight '" + std::string(fields[f]) + "'", line_no);
            w.push_back(*v);
        }
        if (!prototypes.empty() && w.size() != prototypes.front().size()) {
            throw Error(ErrorKind::ModelFormat, "inconsistent prototype dimension", line_no);
        }
        prototypes.push_back(std::move(w));
    }
    if (!header_seen) throw Error(ErrorKind::ModelFormat, "empty model", 1);
    if (prototypes.empty()) throw Error(ErrorKind::ModelFormat, "model has no neurons");
    model.network = SomNetwork::from_prototypes(prototypes);
    return model;
}

}  // namespace som_emission
