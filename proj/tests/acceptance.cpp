// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include "cli.hpp"
#include "fixtures.hpp"

#include "som_emission/som_emission.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace som_emission;
namespace fx = som_emission::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int decimals = 3) { return detail::format_fixed(v, decimals); }

constexpr std::uint64_t kSeeds = 100;

SomConfig default_config(std::size_t dataset_size, std::uint64_t seed) {
    SomConfig c;
    c.epochs = SomConfig::default_epochs(dataset_size);
    c.seed = seed;
    return c;
}

// 1. find_bmu against the exhaustive scan on 10,000 random pairs.
Outcome bmu_oracle() {
    auto start = Clock::now();
    std::mt19937_64 gen(20240601);
    std::size_t mismatches = 0;
    std::size_t ties = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::size_t k = 1 + gen() % 50;
        std::size_t n = 1 + gen() % 4;
        bool on_grid = trial % 2 == 0;  // half-integer grid: frequent exact ties
        auto draw = [&] {
            if (on_grid) return 0.5 * static_cast<double>(static_cast<int>(gen() % 9) - 4);
            return std::uniform_real_distribution<double>(-10.0, 10.0)(gen);
        };
        std::vector<std::vector<double>> protos(k, std::vector<double>(n));
        for (auto& p : protos)
            for (auto& w : p) w = draw();
        std::vector<double> x(n);
        for (auto& c : x) c = draw();

        auto net = SomNetwork::from_prototypes(protos);
        std::size_t got = find_bmu(net, x);
        std::size_t expected = on_grid ? fx::scan_bmu_grid(protos, x) : fx::scan_bmu(protos, x);
        if (got != expected) ++mismatches;
        if (on_grid && expected != fx::scan_bmu_grid(std::vector(protos.rbegin(), protos.rend()), x)) ++ties;
    }
    double elapsed = seconds_since(start);
    return {mismatches == 0 && elapsed < 5.0, "10000 pairs, " + std::to_string(mismatches) + " mismatches, " +
                                                  std::to_string(ties) + " tie cases, " + fmt(elapsed) + " s (< 5 s)"};
}

// 2. Update law and radius masking.
Outcome update_law() {
    SomConfig single;
    single.clusters = 1;
    single.initial_radius = 0;
    auto net = SomNetwork::from_prototypes({{0.0}});
    std::vector<double> one = {1.0};
    train_step(net, one, 0, single);
    double err = std::abs(net.prototype(0)[0] - 0.5);
    bool ok = err <= 1e-12;

    // Every presentation of an ordering run: the update must equal the
    // closed form inside the radius and leave everything else untouched.
    SomConfig c;
    c.clusters = 9;
    c.initial_radius = 4;
    c.epochs = 300;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> v(0.0, 10.0);
    std::vector<std::vector<double>> protos(c.clusters, std::vector<double>(1));
    for (auto& p : protos) p[0] = v(gen);
    auto chain = SomNetwork::from_prototypes(protos);
    std::size_t violations = 0;
    for (std::size_t t = 0; t < c.epochs; ++t) {
        std::vector<double> x = {v(gen)};
        auto before = chain.prototypes();
        std::size_t bmu = fx::scan_bmu(before, x);
        train_step(chain, x, t, c);
        double eta = learning_rate(t, c);
        std::size_t radius = neighborhood_radius(t, c);
        for (std::size_t i = 0; i < c.clusters; ++i) {
            std::size_t d = i > bmu ? i - bmu : bmu - i;
            double expected = d <= radius ? before[i][0] + eta * (x[0] - before[i][0]) : before[i][0];
            if (std::abs(chain.prototype(i)[0] - expected) > 1e-12) ++violations;
        }
    }
    ok = ok && violations == 0;
    return {ok, "w=0,x=1,eta=0.5 -> " + detail::format_exact(net.prototype(0)[0]) + " (|err| " +
                    detail::format_exact(err) + " <= 1e-12); " + std::to_string(violations) +
                    " out-of-law updates over 300 presentations"};
}

// 3. Two CLI train runs produce byte-identical model files.
Outcome determinism(const fs::path& dir) {
    auto csv = (dir / "sample.csv").string();
    std::ofstream(csv) << write_spectrum_csv(bundled_sample());
    auto a = (dir / "a.model").string();
    auto b = (dir / "b.model").string();
    std::ostringstream out;
    std::ostringstream err;
    int ra = cli::run({"train", csv, "--position", "top", "--seed", "42", "--model", a}, out, err);
    int rb = cli::run({"train", csv, "--position", "top", "--seed", "42", "--model", b}, out, err);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    auto ma = slurp(a);
    auto mb = slurp(b);
    bool ok = ra == 0 && rb == 0 && !ma.empty() && ma == mb;
    return {ok, "153-instance top dataset, " + std::to_string(ma.size()) + " bytes, " +
                    (ma == mb ? "identical" : "DIFFERENT")};
}

// 4. Monotone prototype chains on uniform data.
Outcome topological_ordering() {
    auto start = Clock::now();
    std::size_t monotone = 0;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        auto data = fx::uniform_interval(seed);
        auto r = train(data, default_config(data.size(), seed));
        if (fx::monotone_chain(r.network.prototypes())) ++monotone;
    }
    double elapsed = seconds_since(start);
    return {monotone >= 95 && elapsed < 30.0,
            std::to_string(monotone) + "/100 seeds monotone (>= 95), " + fmt(elapsed) + " s (< 30 s)"};
}

// 5. Separated Gaussian clusters are recovered.
Outcome cluster_recovery() {
    std::size_t good = 0;
    double worst_purity = 1.0;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        auto data = fx::separated_clusters(seed);
        SomConfig c;
        c.epochs = 5000;
        c.seed = seed;
        auto r = train(data.points, c);
        std::vector<std::size_t> clusters;
        for (const auto& x : data.points) clusters.push_back(classify(r.network, x));
        double purity = fx::purity(clusters, data.labels, 5, 5);
        worst_purity = std::min(worst_purity, purity);
        if (fx::matches_distinct_centers(r.network.prototypes(), 0.5) && purity >= 0.95) ++good;
    }
    return {good >= 90, std::to_string(good) + "/100 seeds with all prototypes within 0.5 of distinct centers and "
                                                "purity >= 0.95 (>= 90); worst purity " + fmt(worst_purity)};
}

// 6. Per-side maxima equal the reference table; no Below rows at top/bottom.
Outcome table_reproduction() {
    auto samples = bundled_sample();
    auto summaries = summarize_adapters(samples);
    std::size_t mismatches = 0;
    for (const auto& reference : kReferenceMaxima) {
        auto it = std::find_if(summaries.begin(), summaries.end(),
                               [&](const auto& s) { return s.adapter_id == reference.adapter_id; });
        if (it == summaries.end()) {
            mismatches += 6;
            continue;
        }
        for (std::size_t p = 0; p < kAllPositions.size(); ++p) {
            if (it->per_position.at(kAllPositions[p]).b_max_ut != reference.b_max_ut[p]) ++mismatches;
        }
    }
    auto at = [&](const char* a, MeasurementPosition p) {
        for (const auto& s : summaries)
            if (s.adapter_id == a) return s.per_position.at(p).b_max_ut;
        return -1.0;
    };
    std::size_t below_rows = 0;
    for (auto p : {MeasurementPosition::Top, MeasurementPosition::Bottom}) {
        auto ds = build_dataset(samples, p);
        auto r = train(ds, default_config(ds.size(), SomConfig{}.seed));
        for (const auto& row : build_level_report(ds, r.network).rows) {
            if (row.safety == Safety::Below) ++below_rows;
        }
    }
    bool ok = mismatches == 0 && below_rows == 0;
    return {ok, "18 maxima, " + std::to_string(mismatches) + " mismatches (AC1 top " +
                    fmt(at("AC1", MeasurementPosition::Top)) + ", AC3 top " + fmt(at("AC3", MeasurementPosition::Top)) +
                    ", AC2 bottom " + fmt(at("AC2", MeasurementPosition::Bottom)) + "); " + std::to_string(below_rows) +
                    " Below rows at top/bottom"};
}

// 7. High and very-high levels sit below the very-low level's band.
Outcome frequency_ordering() {
    auto samples = bundled_sample();
    std::string detail_text;
    bool ok = true;
    for (auto p : kAllPositions) {
        auto ds = build_dataset(samples, p);
        auto r = train(ds, default_config(ds.size(), SomConfig{}.seed));
        auto report = build_level_report(ds, r.network);
        const auto& very_low = report.row(kVeryLow);
        double high_fmax = 0.0;
        bool side_ok = very_low.member_count > 0;
        for (auto rank : {kHigh, kVeryHigh}) {
            const auto& row = report.row(rank);
            if (row.member_count == 0) continue;
            high_fmax = std::max(high_fmax, row.frequency_hz->max);
        }
        if (side_ok) side_ok = high_fmax < very_low.frequency_hz->min;
        ok = ok && side_ok;
        detail_text += std::string(to_token(p)) + " " + fmt(high_fmax, 1) + "<" +
                       (very_low.member_count ? fmt(very_low.frequency_hz->min, 1) : std::string("-")) +
                       (side_ok ? "" : "!") + " ";
    }
    return {ok, "high/very-high f_max < very-low f_min [Hz]: " + detail_text};
}

// 8. Baseline boundaries.
Outcome baseline_consistency() {
    std::vector<double> span = {0.0, 10.0, 3.3, 7.1};
    auto width = equal_width_bins(span, 5);
    bool width_ok = width.boundaries == std::vector<double>{2.0, 4.0, 6.0, 8.0};

    std::vector<double> distinct;
    for (int i = 0; i < 100; ++i) distinct.push_back(0.1 + 0.05 * i);
    auto freq = equal_frequency_bins(distinct, 5);
    std::vector<std::size_t> sizes(freq.bin_count(), 0);
    for (auto l : freq.labels) ++sizes[l];
    bool freq_ok = sizes == std::vector<std::size_t>{20, 20, 20, 20, 20};
    std::string sizes_text;
    for (auto s : sizes) sizes_text += std::to_string(s) + " ";
    return {width_ok && freq_ok, std::string("equal-width [0,10] k=5 -> ") + (width_ok ? "[2,4,6,8]" : "WRONG") +
                                     "; equal-frequency sizes " + sizes_text};
}

// 9. Training never ends with a larger quantization error than it started.
Outcome quantization_error_drop() {
    std::size_t runs = 0;
    std::vector<std::string> failures;
    auto check = [&](const std::string& name, const TrainingTrace& trace) {
        ++runs;
        if (trace.qe_final > trace.qe_initial) {
            failures.push_back(name + " (" + detail::format_exact(trace.qe_initial) + " -> " +
                               detail::format_exact(trace.qe_final) + ")");
        }
    };
    auto samples = bundled_sample();
    for (auto p : kAllPositions) {
        auto ds = build_dataset(samples, p);
        check("sample/" + std::string(to_token(p)), train(ds, default_config(ds.size(), SomConfig{}.seed)).trace);
    }
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        auto data = fx::uniform_interval(seed);
        check("uniform/seed " + std::to_string(seed), train(data, default_config(data.size(), seed)).trace);
        SomConfig c;
        c.epochs = 5000;
        c.seed = seed;
        check("clusters/seed " + std::to_string(seed), train(fx::separated_clusters(seed).points, c).trace);
    }
    std::string text = std::to_string(runs - failures.size()) + "/" + std::to_string(runs) + " runs with qe_final <= qe_initial";
    for (const auto& f : failures) text += "; violated: " + f;
    return {failures.empty(), text};
}

}  // namespace

int main() {
    auto dir = fs::temp_directory_path() / ("som_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 BMU oracle", bmu_oracle},
        {"2 update law", update_law},
        {"3 determinism", [&] { return determinism(dir); }},
        {"4 topological ordering", topological_ordering},
        {"5 cluster recovery", cluster_recovery},
        {"6 table reproduction", table_reproduction},
        {"7 level/frequency ordering", frequency_ordering},
        {"8 baseline consistency", baseline_consistency},
        {"9 quantization error", quantization_error_drop},
    };

    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    }
    fs::remove_all(dir);
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed;
}
