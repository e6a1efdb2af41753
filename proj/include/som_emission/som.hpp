#pragma once

// One-dimensional-chain Kohonen self-organizing map.
//
// Training draws one input uniformly at random per presentation, finds the
// best-matching unit (squared Euclidean distance, lowest index on ties) and
// moves every prototype within the current grid radius towards the input:
//
//     w_i <- w_i + eta(t) * h(d(i, bmu)) * (x - w_i)
//
// h is 1 inside the radius for the flat kernel. The schedule has an ordering
// phase (eta decays linearly, radius shrinks in equal stages to 0) followed
// by winner-only fine tuning at eta_floor.

#include "som_emission/error.hpp"
#include "som_emission/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace som_emission {

enum class NeighborhoodKernel { Flat, Gaussian };
enum class InitMode { DataRange, SmallRandom };

struct SomConfig {
    std::size_t clusters = 5;        // output neurons on the chain
    std::size_t input_dim = 1;
    std::size_t epochs = 1000;       // total presentations
    std::size_t ordering_steps = 100;
    std::size_t initial_radius = 3;  // in grid steps
    double eta_start = 0.5;
    double eta_floor = 0.01;
    std::uint64_t seed = 42;
    NeighborhoodKernel kernel = NeighborhoodKernel::Flat;
    InitMode init = InitMode::DataRange;

    /// Ten presentations per instance, never fewer than 1000.
    static std::size_t default_epochs(std::size_t dataset_size) noexcept {
        return std::max<std::size_t>(10 * dataset_size, 1000);
    }

    void validate() const {
        auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidConfig, why); };
        if (clusters < 1) fail("clusters must be >= 1");
        if (input_dim < 1) fail("input dimension must be >= 1");
        if (epochs < 1) fail("epochs must be >= 1");
        if (ordering_steps > epochs) fail("ordering_steps must not exceed epochs");
        if (initial_radius > clusters - 1) fail("initial_radius must be <= clusters - 1");
        if (!(eta_start > 0.0 && eta_start <= 1.0)) fail("eta_start must lie in (0, 1]");
        if (!(eta_floor > 0.0 && eta_floor <= eta_start)) fail("eta_floor must lie in (0, eta_start]");
    }

    friend bool operator==(const SomConfig&, const SomConfig&) = default;
};

/// Prototype vectors of a chain of neurons, stored row-major.
class SomNetwork {
public:
    SomNetwork() = default;

    SomNetwork(std::size_t neurons, std::size_t dim)
        : neurons_(neurons), dim_(dim), weights_(neurons * dim, 0.0) {
        if (neurons == 0 || dim == 0) throw Error(ErrorKind::InvalidConfig, "network needs >= 1 neuron and dimension >= 1");
    }

    /// Builds a network from explicit prototypes; all must share one dimension and be finite.
    static SomNetwork from_prototypes(const std::vector<std::vector<double>>& prototypes) {
        if (prototypes.empty()) throw Error(ErrorKind::InvalidConfig, "no prototypes");
        SomNetwork net(prototypes.size(), prototypes.front().size());
        for (std::size_t i = 0; i < prototypes.size(); ++i) {
            if (prototypes[i].size() != net.dim_) throw Error(ErrorKind::DimensionMismatch, "ragged prototypes");
            for (std::size_t d = 0; d < net.dim_; ++d) {
                if (!std::isfinite(prototypes[i][d])) throw Error(ErrorKind::InvalidConfig, "non-finite prototype");
                net.weights_[i * net.dim_ + d] = prototypes[i][d];
            }
        }
        return net;
    }

    std::size_t size() const noexcept { return neurons_; }
    std::size_t dim() const noexcept { return dim_; }

    std::span<const double> prototype(std::size_t i) const { return {weights_.data() + i * dim_, dim_}; }
    std::span<double> prototype(std::size_t i) { return {weights_.data() + i * dim_, dim_}; }

    std::vector<std::vector<double>> prototypes() const {
        std::vector<std::vector<double>> out;
        out.reserve(neurons_);
        for (std::size_t i = 0; i < neurons_; ++i) {
            auto p = prototype(i);
            out.emplace_back(p.begin(), p.end());
        }
        return out;
    }

    std::span<const double> weights() const noexcept { return weights_; }

    friend bool operator==(const SomNetwork&, const SomNetwork&) = default;

private:
    std::size_t neurons_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> weights_;
};

struct TrainingTrace {
    double qe_initial = 0.0;
    double qe_final = 0.0;
    std::size_t presentations = 0;
};

struct TrainResult {
    SomNetwork network;
    TrainingTrace trace;
};

struct ValueRange {
    double low = 0.0;
    double high = 0.0;
};

/// Seeded source with a platform-independent draw sequence. The standard
/// distributions are implementation-defined, so draws are derived from the
/// raw mt19937_64 output directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double low, double high) { return low + (high - low) * uniform(); }

    /// Uniform in [0, n); n must be > 0.
    std::size_t index(std::size_t n) {
        auto wide = static_cast<unsigned __int128>(engine_()) * static_cast<unsigned __int128>(n);
        return static_cast<std::size_t>(wide >> 64);
    }

private:
    std::mt19937_64 engine_;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double sum = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        double diff = a[d] - b[d];
        sum += diff * diff;
    }
    return sum;
}

inline void check_input(const SomNetwork& net, std::span<const double> x) {
    if (x.size() != net.dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "input has dimension " + std::to_string(x.size()) + ", network expects " + std::to_string(net.dim()));
    }
}

}  // namespace detail

/// Each component is drawn uniformly from its dimension's range
/// (DataRange) or from [0, 0.01] (SmallRandom).
inline SomNetwork init_network(const SomConfig& config, std::span<const ValueRange> data_range, Rng& rng) {
    if (data_range.size() != config.input_dim) {
        throw Error(ErrorKind::DimensionMismatch, "data range dimension differs from config.input_dim");
    }
    for (const auto& r : data_range) {
        if (!(r.low <= r.high)) throw Error(ErrorKind::InvalidRange, "low > high");
    }
    SomNetwork net(config.clusters, config.input_dim);
    for (std::size_t i = 0; i < net.size(); ++i) {
        auto w = net.prototype(i);
        for (std::size_t d = 0; d < net.dim(); ++d) {
            w[d] = config.init == InitMode::SmallRandom ? rng.uniform(0.0, 0.01)
                                                        : rng.uniform(data_range[d].low, data_range[d].high);
        }
    }
    return net;
}

inline SomNetwork init_network(const SomConfig& config, std::span<const ValueRange> data_range) {
    Rng rng(config.seed);
    return init_network(config, data_range, rng);
}

/// Index of the prototype closest to x; the lowest index wins ties.
inline std::size_t find_bmu(const SomNetwork& net, std::span<const double> x) {
    detail::check_input(net, x);
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < net.size(); ++i) {
        double dist = detail::squared_distance(x, net.prototype(i));
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    return best;
}

/// Class label for x. Same as find_bmu.
inline std::size_t classify(const SomNetwork& net, std::span<const double> x) { return find_bmu(net, x); }

inline std::size_t grid_distance(std::size_t i, std::size_t j, std::size_t neurons) {
    if (i >= neurons || j >= neurons) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "neuron index out of range [0, " + std::to_string(neurons) + ")");
    }
    return i > j ? i - j : j - i;
}

inline double learning_rate(std::size_t t, const SomConfig& config) noexcept {
    if (t >= config.ordering_steps) return config.eta_floor;
    double frac = static_cast<double>(t) / static_cast<double>(config.ordering_steps);
    return config.eta_start + (config.eta_floor - config.eta_start) * frac;
}

inline std::size_t neighborhood_radius(std::size_t t, const SomConfig& config) noexcept {
    if (t >= config.ordering_steps) return 0;
    std::size_t stages = config.initial_radius + 1;
    std::size_t stage_len = (config.ordering_steps + stages - 1) / stages;
    std::size_t shrink = t / stage_len;
    return shrink >= config.initial_radius ? 0 : config.initial_radius - shrink;
}

inline double neighborhood_weight(std::size_t distance, std::size_t radius, NeighborhoodKernel kernel) noexcept {
    if (distance > radius) return 0.0;
    if (kernel == NeighborhoodKernel::Flat || radius == 0) return 1.0;
    double d = static_cast<double>(distance);
    double sigma = static_cast<double>(radius);
    return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

/// One presentation of x at step t. Returns the BMU.
inline std::size_t train_step(SomNetwork& net, std::span<const double> x, std::size_t t, const SomConfig& config) {
    std::size_t bmu = find_bmu(net, x);
    double eta = learning_rate(t, config);
    std::size_t radius = neighborhood_radius(t, config);
    std::size_t lo = bmu >= radius ? bmu - radius : 0;
    std::size_t hi = std::min(net.size() - 1, bmu + radius);
    for (std::size_t i = lo; i <= hi; ++i) {
        double step = eta * neighborhood_weight(grid_distance(i, bmu, net.size()), radius, config.kernel);
        auto w = net.prototype(i);
        for (std::size_t d = 0; d < w.size(); ++d) w[d] += step * (x[d] - w[d]);
    }
    return bmu;
}

/// Mean over the data of the squared distance to the BMU prototype.
inline double quantization_error(const SomNetwork& net, std::span<const std::vector<double>> data) {
    if (data.empty()) throw Error(ErrorKind::EmptyDataset, "quantization error of an empty dataset");
    double sum = 0.0;
    for (const auto& x : data) {
        std::size_t bmu = find_bmu(net, x);
        sum += detail::squared_distance(x, net.prototype(bmu));
    }
    return sum / static_cast<double>(data.size());
}

inline std::vector<ValueRange> data_range(std::span<const std::vector<double>> data) {
    if (data.empty()) throw Error(ErrorKind::EmptyDataset, "no data");
    std::vector<ValueRange> range;
    for (double v : data.front()) range.push_back({v, v});
    for (const auto& x : data) {
        if (x.size() != range.size()) throw Error(ErrorKind::DimensionMismatch, "ragged input data");
        for (std::size_t d = 0; d < x.size(); ++d) {
            if (!std::isfinite(x[d])) throw Error(ErrorKind::InvalidRange, "non-finite feature");
            range[d].low = std::min(range[d].low, x[d]);
            range[d].high = std::max(range[d].high, x[d]);
        }
    }
    return range;
}

/// Full training run; deterministic for a given (data order, config).
inline TrainResult train(std::span<const std::vector<double>> data, const SomConfig& config) {
    if (data.empty()) throw Error(ErrorKind::EmptyDataset, "cannot train on an empty dataset");
    config.validate();
    auto range = data_range(data);

    Rng rng(config.seed);
    TrainResult result{init_network(config, range, rng), {}};
    result.trace.qe_initial = quantization_error(result.network, data);
    for (std::size_t t = 0; t < config.epochs; ++t) {
        train_step(result.network, data[rng.index(data.size())], t, config);
    }
    result.trace.presentations = config.epochs;
    result.trace.qe_final = quantization_error(result.network, data);
    return result;
}

inline TrainResult train(const EmissionDataset& dataset, const SomConfig& config) {
    auto features = dataset.features();
    return train(std::span<const std::vector<double>>(features), config);
}

}  // namespace som_emission
