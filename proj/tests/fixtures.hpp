#pragma once

// Test-only data generators and brute-force oracles. Nothing here calls
// into the code paths it is used to check.

#include "som_emission/som.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace som_emission::testing {

struct LabelledData {
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> labels;
};

inline constexpr double kClusterCenters[5] = {1.0, 10.0, 20.0, 30.0, 40.0};

/// 200 points drawn uniformly from [0, 1).
inline std::vector<std::vector<double>> uniform_interval(std::uint64_t seed, std::size_t count = 200) {
    Rng rng(seed + 1000);
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back({rng.uniform()});
    return out;
}

/// 100 points per center, Gaussian with standard deviation 0.1 (Box-Muller).
inline LabelledData separated_clusters(std::uint64_t seed) {
    Rng rng(seed + 5000);
    LabelledData out;
    for (std::size_t c = 0; c < 5; ++c) {
        for (std::size_t i = 0; i < 100; ++i) {
            double u1 = 1.0 - rng.uniform();  // (0, 1]
            double u2 = rng.uniform();
            double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            out.points.push_back({kClusterCenters[c] + 0.1 * z});
            out.labels.push_back(c);
        }
    }
    return out;
}

/// Exhaustive argmin: distances computed up front, first minimum kept.
inline std::size_t scan_bmu(const std::vector<std::vector<double>>& prototypes, const std::vector<double>& x) {
    std::vector<double> dist;
    for (const auto& w : prototypes) {
        double s = 0.0;
        for (std::size_t d = 0; d < x.size(); ++d) s += (x[d] - w[d]) * (x[d] - w[d]);
        dist.push_back(s);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.size(); ++i) {
        if (dist[i] < dist[best]) best = i;
    }
    return best;
}

/// Same argmin in exact integer arithmetic for points on a half-integer grid.
inline std::size_t scan_bmu_grid(const std::vector<std::vector<double>>& prototypes, const std::vector<double>& x) {
    std::size_t best = 0;
    std::int64_t best_dist = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < prototypes.size(); ++i) {
        std::int64_t s = 0;
        for (std::size_t d = 0; d < x.size(); ++d) {
            auto diff = static_cast<std::int64_t>(std::llround(2.0 * x[d])) -
                        static_cast<std::int64_t>(std::llround(2.0 * prototypes[i][d]));
            s += diff * diff;
        }
        if (s < best_dist) {
            best_dist = s;
            best = i;
        }
    }
    return best;
}

inline double scan_quantization_error(const std::vector<std::vector<double>>& prototypes,
                                      const std::vector<std::vector<double>>& data) {
    double total = 0.0;
    for (const auto& x : data) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& w : prototypes) {
            double s = 0.0;
            for (std::size_t d = 0; d < x.size(); ++d) s += (x[d] - w[d]) * (x[d] - w[d]);
            best = std::min(best, s);
        }
        total += best;
    }
    return total / static_cast<double>(data.size());
}

/// Fraction of points whose cluster's majority generator label matches their own.
inline double purity(const std::vector<std::size_t>& clusters, const std::vector<std::size_t>& labels,
                     std::size_t cluster_count, std::size_t label_count) {
    std::vector<std::vector<std::size_t>> counts(cluster_count, std::vector<std::size_t>(label_count, 0));
    for (std::size_t i = 0; i < clusters.size(); ++i) ++counts[clusters[i]][labels[i]];
    std::size_t agree = 0;
    for (const auto& row : counts) {
        std::size_t m = 0;
        for (auto c : row) m = std::max(m, c);
        agree += m;
    }
    return static_cast<double>(agree) / static_cast<double>(clusters.size());
}

inline bool monotone_chain(const std::vector<std::vector<double>>& prototypes) {
    bool up = true;
    bool down = true;
    for (std::size_t i = 1; i < prototypes.size(); ++i) {
        if (prototypes[i][0] < prototypes[i - 1][0]) up = false;
        if (prototypes[i][0] > prototypes[i - 1][0]) down = false;
    }
    return up || down;
}

/// Each prototype within `tolerance` of a different center.
inline bool matches_distinct_centers(const std::vector<std::vector<double>>& prototypes, double tolerance) {
    std::vector<bool> used(5, false);
    for (const auto& w : prototypes) {
        bool hit = false;
        for (std::size_t c = 0; c < 5; ++c) {
            if (!used[c] && std::abs(w[0] - kClusterCenters[c]) < tolerance) {
                used[c] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace som_emission::testing
