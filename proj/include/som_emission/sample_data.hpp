#pragma once

// Synthetic three-adapter sample used by the demo and the tests.
//
// NOT measured data. Each adapter/position spectrum is a smooth low-pass
// shape over 51 frequencies from 30 to 300 Hz: a plateau at low frequency,
// a drop around 95 Hz, and a position-dependent floor. Four timestamps per
// frequency carry small multiplicative jitter. The 30 Hz reading at t = 0
// is pinned to the reference per-side maximum, which is the maximum of
// every (adapter, position) series.

#include "som_emission/spectrum.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace som_emission {

struct ReferenceSideMaxima {
    const char* adapter_id;
    std::array<double, 6> b_max_ut;  // indexed like kAllPositions
};

// Per-side emission of the three 90 W adapters, in µT.
inline constexpr std::array<ReferenceSideMaxima, 3> kReferenceMaxima = {{
    {"AC1", {4.910, 4.220, 0.350, 0.348, 0.348, 0.348}},
    {"AC2", {4.360, 4.210, 0.350, 0.348, 0.364, 0.345}},
    {"AC3", {15.400, 4.260, 0.460, 0.462, 0.452, 0.451}},
}};

inline constexpr std::size_t kSampleFrequencyCount = 51;
inline constexpr std::size_t kSampleTimestamps = 4;

inline double sample_frequency(std::size_t j) { return static_cast<double>(300 + 54 * j) / 10.0; }

inline std::vector<SpectrumSample> bundled_sample() {
    // Floor of each spectrum, in µT, by position.
    constexpr std::array<double, 6> floor_ut = {0.9, 0.6, 0.12, 0.12, 0.12, 0.12};

    auto low_pass = [](double f) { return 1.0 / (1.0 + std::exp((f - 95.0) / 10.0)); };
    const double at_first = low_pass(sample_frequency(0));

    std::vector<SpectrumSample> out;
    out.reserve(kReferenceMaxima.size() * 6 * kSampleFrequencyCount * kSampleTimestamps);
    for (const auto& adapter : kReferenceMaxima) {
        for (std::size_t p = 0; p < kAllPositions.size(); ++p) {
            const double peak = adapter.b_max_ut[p];
            const double floor = floor_ut[p];
            for (std::size_t j = 0; j < kSampleFrequencyCount; ++j) {
                const double f = sample_frequency(j);
                const double tilt = 1.0 - 0.15 * (f - 30.0) / 270.0;
                const double base = (floor + (peak - floor) * low_pass(f) / at_first) * tilt;
                for (std::size_t k = 0; k < kSampleTimestamps; ++k) {
                    double jitter = 1.0 - 0.02 * static_cast<double>((k + j) % kSampleTimestamps) / 3.0;
                    double value = (j == 0 && k == 0) ? peak : std::round(base * jitter * 1e4) / 1e4;
                    out.push_back({adapter.adapter_id, kAllPositions[p], f,
                                   static_cast<std::int64_t>(k * 1000), value, {}, {}, {}});
                }
            }
        }
    }
    return out;
}

}  // namespace som_emission
