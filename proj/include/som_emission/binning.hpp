#pragma once

// Equal-width and equal-frequency discretization, kept as baselines to set
// beside the SOM emission levels.

#include "som_emission/error.hpp"

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace som_emission {

/// Bins are half-open [b_{j-1}, b_j); the last bin is closed above.
struct BinAssignment {
    std::vector<double> boundaries;   // strictly ascending, bin_count() - 1 entries
    std::vector<std::size_t> labels;  // one per input value

    std::size_t bin_count() const noexcept { return boundaries.size() + 1; }

    friend bool operator==(const BinAssignment&, const BinAssignment&) = default;
};

/// Bin index of value under the half-open convention.
inline std::size_t bin_of(double value, std::span<const double> boundaries) {
    return static_cast<std::size_t>(std::upper_bound(boundaries.begin(), boundaries.end(), value) - boundaries.begin());
}

namespace detail {

inline void check_binning_args(std::span<const double> values, std::size_t k) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "no values to bin");
    if (k == 0) throw Error(ErrorKind::NonPositiveK, "bin count must be >= 1");
}

inline BinAssignment label_all(std::span<const double> values, std::vector<double> boundaries) {
    BinAssignment out{std::move(boundaries), {}};
    out.labels.reserve(values.size());
    for (double v : values) out.labels.push_back(bin_of(v, out.boundaries));
    return out;
}

}  // namespace detail

inline BinAssignment equal_width_bins(std::span<const double> values, std::size_t k) {
    detail::check_binning_args(values, k);
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    std::vector<double> boundaries;
    if (hi > lo) {
        double width = (hi - lo) / static_cast<double>(k);
        for (std::size_t j = 1; j < k; ++j) {
            double b = lo + static_cast<double>(j) * width;
            if (boundaries.empty() || b > boundaries.back()) boundaries.push_back(b);
        }
    }
    return detail::label_all(values, std::move(boundaries));
}

/// Boundary j is the sorted value at 0-based position ceil(j * n / k), i.e.
/// the first member of bin j. Repeated values collapse equal boundaries, so
/// heavy ties yield fewer than k bins.
inline BinAssignment equal_frequency_bins(std::span<const double> values, std::size_t k) {
    detail::check_binning_args(values, k);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    std::vector<double> boundaries;
    for (std::size_t j = 1; j < k; ++j) {
        std::size_t pos = (j * n + k - 1) / k;
        if (pos >= n) break;
        double b = sorted[pos];
        if (b <= sorted.front()) continue;
        if (boundaries.empty() || b > boundaries.back()) boundaries.push_back(b);
    }
    return detail::label_all(values, std::move(boundaries));
}

}  // namespace som_emission
