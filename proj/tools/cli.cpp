#include "cli.hpp"

#include "som_emission/som_emission.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace som_emission::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

MeasurementPosition position_flag(const std::string& flag, const std::string& value) {
    auto p = parse_position(value);
    if (!p) throw UsageError(flag + ": unknown position '" + value + "' (top|bottom|left30|right30|up30|down30)");
    return *p;
}

ReportFormat format_flag(const std::string& value) {
    if (value == "markdown") return ReportFormat::Markdown;
    if (value == "csv") return ReportFormat::Csv;
    if (value == "json") return ReportFormat::Json;
    throw UsageError("--format: expected markdown|csv|json, got '" + value + "'");
}

// --seed wins, then SOM_EMISSION_SEED, then the library default.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("SOM_EMISSION_SEED")) {
        auto v = detail::parse_uint64(env);
        if (!v) throw UsageError(std::string("SOM_EMISSION_SEED is not an unsigned integer: '") + env + "'");
        return *v;
    }
    return SomConfig{}.seed;
}

struct TrainFlags {
    std::size_t clusters = 5;
    std::optional<std::size_t> epochs;
    std::optional<std::uint64_t> seed;
    std::size_t ordering_steps = 100;
    std::size_t radius = 3;
    double eta_start = 0.5;
    double eta_floor = 0.01;
    std::string kernel = "flat";
    std::string init = "data-range";

    void attach(CLI::App& cmd) {
        cmd.add_option("--clusters", clusters, "Output neurons (emission levels)");
        cmd.add_option("--epochs", epochs, "Total presentations (default max(10 x instances, 1000))");
        cmd.add_option("--seed", seed, "Random seed (fallback: SOM_EMISSION_SEED)");
        cmd.add_option("--ordering-steps", ordering_steps, "Presentations in the ordering phase");
        cmd.add_option("--radius", radius, "Initial neighbourhood radius in grid steps");
        cmd.add_option("--eta-start", eta_start, "Learning rate at t = 0");
        cmd.add_option("--eta-floor", eta_floor, "Learning rate after the ordering phase");
        cmd.add_option("--kernel", kernel, "flat|gaussian")->check(CLI::IsMember({"flat", "gaussian"}));
        cmd.add_option("--init", init, "data-range|small-random")->check(CLI::IsMember({"data-range", "small-random"}));
    }

    SomConfig config(std::size_t dataset_size) const {
        SomConfig c;
        c.clusters = clusters;
        c.input_dim = 1;
        c.epochs = epochs.value_or(SomConfig::default_epochs(dataset_size));
        c.ordering_steps = ordering_steps;
        c.initial_radius = radius;
        c.eta_start = eta_start;
        c.eta_floor = eta_floor;
        c.seed = resolve_seed(seed);
        c.kernel = kernel == "gaussian" ? NeighborhoodKernel::Gaussian : NeighborhoodKernel::Flat;
        c.init = init == "small-random" ? InitMode::SmallRandom : InitMode::DataRange;
        try {
            c.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        return c;
    }
};

std::vector<SpectrumSample> load_samples(const std::string& path) { return parse_spectrum_csv(read_file(path)); }

std::string summary_table(std::span<const AdapterSummary> summaries) {
    std::string out = "### Adapter summary (mean / max over the spectrum, uT)\n\n| Adapter |";
    for (auto p : kAllPositions) out += " " + std::string(to_token(p)) + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < kAllPositions.size(); ++i) out += "---:|";
    out += '\n';
    for (const auto& s : summaries) {
        out += "| " + s.adapter_id + " |";
        for (auto p : kAllPositions) {
            auto it = s.per_position.find(p);
            if (it == s.per_position.end()) {
                out += " - |";
                continue;
            }
            out += " " + detail::format_fixed(it->second.b_mean_ut, 3) + " / " +
                   detail::format_fixed(it->second.b_max_ut, 3) + " |";
        }
        out += '\n';
    }
    return out;
}

int validate_cmd(const std::string& csv, std::ostream& out) {
    auto samples = load_samples(csv);
    std::size_t instances = 0;
    std::string per_position;
    for (auto p : kAllPositions) {
        if (std::none_of(samples.begin(), samples.end(), [p](const auto& s) { return s.position == p; })) continue;
        auto ds = build_dataset(samples, p);
        instances += ds.size();
        per_position += "  " + std::string(to_token(p)) + ": " + std::to_string(ds.size()) + " instances, " +
                        detail::format_exact(ds.frequency_band.f_min_hz) + "-" +
                        detail::format_exact(ds.frequency_band.f_max_hz) + " Hz\n";
    }
    out << "ok: " << samples.size() << " samples, " << summarize_adapters(samples).size() << " adapters, "
        << instances << " instances\n"
        << per_position;
    return kExitOk;
}

int train_cmd(const std::string& csv, const std::string& position, const TrainFlags& flags,
              const std::string& model_path, std::ostream& out, std::ostream& err) {
    auto pos = position_flag("--position", position);
    auto ds = build_dataset(load_samples(csv), pos);
    auto config = flags.config(ds.size());
    auto result = train(ds, config);
    auto model = save_model(result.network, config);
    if (model_path.empty()) {
        out << model;
    } else {
        write_file(model_path, model);
    }
    err << "trained " << result.trace.presentations << " presentations on " << ds.size()
        << " instances; quantization error " << detail::format_exact(result.trace.qe_initial) << " -> "
        << detail::format_exact(result.trace.qe_final) << '\n';
    return kExitOk;
}

int report_cmd(const std::string& csv, const std::string& position, const std::string& model_path, double limit,
               const std::string& format, std::ostream& out) {
    auto pos = position_flag("--position", position);
    auto fmt = format_flag(format);
    auto ds = build_dataset(load_samples(csv), pos);
    auto model = load_model(read_file(model_path));
    out << render_report(build_level_report(ds, model.network, limit), fmt);
    return kExitOk;
}

int baseline_cmd(const std::string& csv, const std::string& position, const std::string& method, std::size_t bins,
                 double limit, const std::string& format, std::ostream& out) {
    auto pos = position_flag("--position", position);
    auto fmt = format_flag(format);
    if (bins == 0) throw UsageError("--bins must be >= 1");
    auto ds = build_dataset(load_samples(csv), pos);
    std::vector<double> values;
    for (const auto& inst : ds.instances) values.push_back(inst.b_mean_ut);
    auto assignment = method == "width" ? equal_width_bins(values, bins) : equal_frequency_bins(values, bins);
    if (fmt == ReportFormat::Markdown) {
        out << "Equal-" << (method == "width" ? "width" : "frequency") << " boundaries [uT]:";
        for (double b : assignment.boundaries) out << ' ' << detail::format_exact(b);
        out << "\n\n";
    }
    out << render_report(build_level_report_from_labels(ds, assignment.labels, assignment.bin_count(), limit), fmt);
    return kExitOk;
}

int plot_cmd(const std::string& csv, const std::string& adapter, const std::string& pos_a, const std::string& pos_b,
             const std::string& out_dir, std::ostream& out) {
    auto a = position_flag("--pos-a", pos_a);
    auto b = position_flag("--pos-b", pos_b);
    auto plot = emit_plot_data(load_samples(csv), adapter, a, b);
    std::filesystem::path dir(out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + out_dir + "': " + ec.message());
    const std::string ta(to_token(a));
    const std::string tb(to_token(b));
    const std::vector<std::pair<std::string, const Series*>> files = {
        {adapter + "_" + ta + ".dat", &plot.first},
        {adapter + "_" + tb + ".dat", &plot.second},
        {adapter + "_" + ta + "_minus_" + tb + ".dat", &plot.difference},
    };
    for (const auto& [name, series] : files) {
        write_file(dir / name, render_series(*series));
        out << (dir / name).string() << '\n';
    }
    return kExitOk;
}

int demo_cmd(const std::optional<std::uint64_t>& seed_flag, const std::string& sample_out, double limit,
             std::ostream& out) {
    auto samples = bundled_sample();
    if (!sample_out.empty()) write_file(sample_out, write_spectrum_csv(samples));
    const auto seed = resolve_seed(seed_flag);

    out << "Synthetic sample: 3 adapters x 6 positions x 51 frequencies x 4 timestamps (not measured data)\n\n";
    out << summary_table(summarize_adapters(samples)) << '\n';
    for (auto p : kAllPositions) {
        auto ds = build_dataset(samples, p);
        SomConfig config;
        config.epochs = SomConfig::default_epochs(ds.size());
        config.seed = seed;
        auto result = train(ds, config);
        out << render_report(build_level_report(ds, result.network, limit), ReportFormat::Markdown) << '\n';
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Self-organizing-map classification of ELF magnetic-field spectra", "som-emission"};
    app.require_subcommand(1);

    std::string csv;
    std::string position;
    std::string model_path;
    std::string format = "markdown";
    double limit = kTcoLimitUt;

    auto* validate = app.add_subcommand("validate", "Parse a spectrum CSV and check its invariants");
    validate->add_option("csv", csv, "Spectrum CSV")->required();

    TrainFlags train_flags;
    auto* train_sub = app.add_subcommand("train", "Train a SOM on one position's dataset");
    train_sub->add_option("csv", csv, "Spectrum CSV")->required();
    train_sub->add_option("--position", position, "Measurement position")->required();
    train_sub->add_option("--model", model_path, "Model output file (default: stdout)");
    train_flags.attach(*train_sub);

    auto* report = app.add_subcommand("report", "Emission-level table for one position");
    report->add_option("csv", csv, "Spectrum CSV")->required();
    report->add_option("--position", position, "Measurement position")->required();
    report->add_option("--model", model_path, "Trained model file")->required();
    report->add_option("--limit", limit, "Safety reference limit in uT");
    report->add_option("--format", format, "markdown|csv|json");

    std::string method;
    std::size_t bins = 5;
    auto* baseline = app.add_subcommand("baseline", "Equal-width or equal-frequency binning of one position");
    baseline->add_option("csv", csv, "Spectrum CSV")->required();
    baseline->add_option("--position", position, "Measurement position")->required();
    baseline->add_option("--method", method, "width|frequency")->required()->check(CLI::IsMember({"width", "frequency"}));
    baseline->add_option("--bins", bins, "Bin count");
    baseline->add_option("--limit", limit, "Safety reference limit in uT");
    baseline->add_option("--format", format, "markdown|csv|json");

    std::string adapter;
    std::string pos_a;
    std::string pos_b;
    std::string out_dir;
    auto* plot = app.add_subcommand("plot", "Write two spectra of one adapter and their difference");
    plot->add_option("csv", csv, "Spectrum CSV")->required();
    plot->add_option("--adapter", adapter, "Adapter id")->required();
    plot->add_option("--pos-a", pos_a, "First position")->required();
    plot->add_option("--pos-b", pos_b, "Second position")->required();
    plot->add_option("--out-dir", out_dir, "Output directory")->required();

    std::optional<std::uint64_t> demo_seed;
    std::string sample_out;
    auto* demo = app.add_subcommand("demo", "Run the bundled synthetic sample end to end");
    demo->add_option("--seed", demo_seed, "Random seed (fallback: SOM_EMISSION_SEED)");
    demo->add_option("--write-sample", sample_out, "Also write the sample as CSV");
    demo->add_option("--limit", limit, "Safety reference limit in uT");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return validate_cmd(csv, out);
        if (train_sub->parsed()) return train_cmd(csv, position, train_flags, model_path, out, err);
        if (report->parsed()) return report_cmd(csv, position, model_path, limit, format, out);
        if (baseline->parsed()) return baseline_cmd(csv, position, method, bins, limit, format, out);
        if (plot->parsed()) return plot_cmd(csv, adapter, pos_a, pos_b, out_dir, out);
        if (demo->parsed()) return demo_cmd(demo_seed, sample_out, limit, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const IoError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace som_emission::cli
