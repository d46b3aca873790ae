#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "forecastability/config.hpp"
#include "forecastability/error.hpp"
#include "forecastability/experiments.hpp"
#include "forecastability/ingest.hpp"
#include "forecastability/output.hpp"
#include "forecastability/report.hpp"
#include "forecastability/synth.hpp"

namespace fcast::cli {

namespace {

struct Options {
    std::optional<std::uint64_t> seed;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::string> format;
    unsigned threads = 0;

    std::optional<std::size_t> embedding_dim;
    std::optional<std::size_t> delay;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> theiler_window;
    std::optional<std::string> search;

    std::string input;
    std::string errors;
    bool wide = false;
    std::vector<std::string> frequencies;
    std::optional<std::string> id_column;
    std::optional<std::string> time_column;
    std::optional<std::string> value_column;
    std::optional<std::vector<std::string>> level_columns;
    bool log2pi = false;

    std::optional<std::string> kind;
    std::optional<std::size_t> length;
    std::optional<double> frequency;
    std::optional<double> noise_sigma;
    std::optional<double> sigma;

    std::optional<std::size_t> segment_length;
    std::optional<std::size_t> omega_window;
    std::optional<std::size_t> lambda_window;

    std::optional<std::string> metric;
    std::optional<std::vector<std::size_t>> lengths;
    std::optional<std::vector<double>> rates;
    std::optional<std::size_t> replicates;
};

const std::vector<std::string> kKinds{"sine", "multisine", "noisy_multisine", "lorenz", "white_noise"};

synth::SignalKind kind_from(const std::string& name) {
    const auto it = std::find(kKinds.begin(), kKinds.end(), name);
    return static_cast<synth::SignalKind>(it - kKinds.begin());
}

class Emitter {
public:
    Emitter(const Options& o, std::ostream& out) : dir_(o.out_dir), format_(o.format), out_(out) {}

    [[nodiscard]] bool wants(std::string_view fmt) const { return !format_ || *format_ == fmt; }

    void write(const std::string& name, std::string_view contents) {
        const auto path = dir_ / name;
        output::write_file(path, contents);
        out_ << path.string() << '\n';
    }

private:
    std::filesystem::path dir_;
    std::optional<std::string> format_;
    std::ostream& out_;
};

config::RunConfig resolve(const Options& o) {
    config::RunConfig rc = o.config_path.empty() ? config::RunConfig{} : config::load_config(o.config_path);
    if (o.embedding_dim) rc.embedding.embedding_dim = *o.embedding_dim;
    if (o.delay) rc.embedding.delay = *o.delay;
    if (o.horizon) rc.embedding.horizon = *o.horizon;
    if (o.theiler_window) rc.embedding.theiler_window = *o.theiler_window;
    if (o.search) {
        rc.embedding.search =
            *o.search == "exhaustive" ? lyapunov::NeighborSearch::exhaustive : lyapunov::NeighborSearch::kd_tree;
    }
    rc.embedding.validate();

    if (o.seed) {
        rc.signal.seed = *o.seed;
        rc.benchmark.seed = *o.seed;
        rc.sweep.base_seed = *o.seed;
        rc.report.seed = *o.seed;
    }
    if (o.id_column) rc.schema.id_column = *o.id_column;
    if (o.time_column) rc.schema.time_column = *o.time_column;
    if (o.value_column) rc.schema.value_column = *o.value_column;
    if (o.level_columns) rc.schema.level_columns = *o.level_columns;
    if (o.log2pi) rc.report.emit_log2pi_variant = true;
    if (!o.frequencies.empty()) {
        rc.report.frequencies.clear();
        for (const auto& f : o.frequencies) rc.report.frequencies.push_back(*parse_frequency(f));
    }
    return rc;
}

Parallelism parallelism(const Options& o) {
    return o.threads == 0 ? Parallelism::hardware() : Parallelism{o.threads};
}

void emit_report(const report::MetricReport& r, const std::string& stem, Emitter& emit) {
    if (emit.wants("csv")) emit.write(stem + ".csv", output::report_csv(r));
    if (emit.wants("json")) emit.write(stem + ".json", output::dump(output::report_json(r)));
}

std::vector<report::ErrorRecord> load_errors(const Options& o) {
    return o.errors.empty() ? std::vector<report::ErrorRecord>{} : report::load_error_csv(o.errors);
}

void run_analyze(const Options& o, Emitter& emit) {
    auto rc = resolve(o);
    if (o.frequencies.empty()) rc.report.frequencies = {Frequency::daily};
    const auto dataset = ingest::load_long_csv(o.input, rc.schema);
    ingest::LevelSeries level{"series", {}};
    for (const auto& e : dataset.series) level.series.push_back(e.series);
    const auto errors = load_errors(o);
    const auto r = report::build_report({level}, rc.report_config(), o.errors.empty() ? nullptr : &errors,
                                        parallelism(o));
    emit_report(r, "analyze", emit);
}

void run_report(const Options& o, Emitter& emit) {
    const auto rc = resolve(o);
    const auto dataset = o.wide ? ingest::load_wide_csv(o.input) : ingest::load_long_csv(o.input, rc.schema);
    const auto hierarchy = rc.hierarchy.value_or(ingest::HierarchySpec::from_dimensions(dataset.dimensions));
    const auto levels = ingest::aggregate_levels(dataset, hierarchy);
    const auto errors = load_errors(o);
    const auto r = report::build_report(levels, rc.report_config(), o.errors.empty() ? nullptr : &errors,
                                        parallelism(o));
    emit_report(r, "report", emit);
}

void run_synth(const Options& o, Emitter& emit) {
    auto spec = resolve(o).signal;
    if (o.kind) spec.kind = kind_from(*o.kind);
    if (o.length) spec.length = *o.length;
    if (o.frequency) spec.params.components = {{*o.frequency, 1.0, 0.0}};
    if (o.noise_sigma) spec.params.noise_sigma = *o.noise_sigma;
    if (o.sigma) spec.params.sigma = *o.sigma;
    const auto series = synth::generate(spec);
    if (emit.wants("csv")) emit.write("series.csv", output::series_csv({series}));
    if (emit.wants("json")) {
        auto doc = output::series_json({series});
        doc["spec"] = config::to_json(spec);
        emit.write("series.json", output::dump(doc));
    }
}

void run_benchmark(const Options& o, Emitter& emit) {
    auto rc = resolve(o);
    if (o.segment_length) rc.benchmark.segment_length = *o.segment_length;
    if (o.omega_window) rc.omega_plan.window_size = *o.omega_window;
    if (o.lambda_window) rc.lambda_plan.window_size = *o.lambda_window;
    const auto bench = synth::five_segment_benchmark(rc.benchmark);
    const auto cfg = rc.segment_config();
    const auto seg = experiments::segment_metrics(bench, cfg, parallelism(o));
    if (emit.wants("csv")) {
        emit.write("benchmark_segments.csv", output::segments_csv(seg));
        emit.write("benchmark_series.csv", output::benchmark_series_csv(bench, seg));
    }
    if (emit.wants("json")) emit.write("benchmark.json", output::dump(output::benchmark_json(rc.benchmark, cfg, bench, seg)));
}

void run_sweep(const Options& o, Emitter& emit) {
    auto rc = resolve(o);
    if (o.kind) rc.sweep.generator.kind = kind_from(*o.kind);
    if (o.metric) {
        rc.sweep.metric = *o.metric == "lambda" ? experiments::Metric::largest_lyapunov
                                                : experiments::Metric::spectral_predictability;
    }
    if (o.lengths) rc.sweep.lengths = *o.lengths;
    if (o.rates) rc.sweep.sparsity_rates = *o.rates;
    if (o.replicates) rc.sweep.replicates = *o.replicates;
    for (const double r : rc.sweep.sparsity_rates) {
        if (!(r >= 0.0 && r < 1.0)) throw Error(Errc::invalid_config, "sparsity rates must lie in [0, 1)");
    }
    if (rc.sweep.replicates == 0) throw Error(Errc::invalid_config, "replicates must be at least 1");
    const auto spec = rc.sweep_spec();
    const auto result = experiments::run_sweep(spec, parallelism(o));
    if (emit.wants("csv")) emit.write("sweep.csv", output::sweep_csv(result));
    if (emit.wants("json")) emit.write("sweep.json", output::dump(output::sweep_json(spec, result)));
}

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::usage: return usage_error;
        case ErrorCategory::data: return data_error;
        case ErrorCategory::computation: return computation_error;
    }
    return computation_error;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Forecastability metrics: spectral predictability and largest Lyapunov exponent", "fcast"};
    app.fallthrough();
    app.require_subcommand(1);

    app.add_option("--seed", o.seed, "Seed for every generator and baseline");
    app.add_option("--config", o.config_path, "JSON file with spectral, embedding, hierarchy, schema, signal, "
                                              "sweep, benchmark and report sections")
        ->check(CLI::ExistingFile);
    app.add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", o.format, "Write only this format (default: both)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    app.add_option("--embedding-dim", o.embedding_dim, "Embedding dimension m");
    app.add_option("--delay", o.delay, "Embedding delay tau");
    app.add_option("--horizon", o.horizon, "Divergence horizon in samples");
    app.add_option("--theiler-window", o.theiler_window, "Temporal exclusion around each state (default m*tau)");
    app.add_option("--search", o.search, "Neighbor search")->check(CLI::IsMember({"kd_tree", "exhaustive"}));

    const auto add_table_options = [&](CLI::App* sub) {
        sub->add_option("input", o.input, "Long CSV: series_id,<levels...>,t,value")->required()->check(CLI::ExistingFile);
        sub->add_option("--errors", o.errors, "Error CSV: series_id,model,wape[,frequency]")->check(CLI::ExistingFile);
        sub->add_option("--frequencies", o.frequencies, "daily and/or weekly")
            ->delimiter(',')
            ->check(CLI::IsMember({"daily", "weekly"}));
        sub->add_option("--id-column", o.id_column);
        sub->add_option("--time-column", o.time_column);
        sub->add_option("--value-column", o.value_column);
        sub->add_option("--level-columns", o.level_columns)->delimiter(',');
        sub->add_flag("--log2pi", o.log2pi, "Also report Omega normalized by log(2 pi)");
    };

    auto* analyze = app.add_subcommand("analyze", "Omega and lambda for every series of a CSV");
    add_table_options(analyze);

    auto* report = app.add_subcommand("report", "Hierarchy aggregation, level summaries and error correlations");
    add_table_options(report);
    report->add_flag("--wide", o.wide, "Input is a wide file (id,cat_id,dept_id,item_id,...,d_1,d_2,...)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic series");
    synth->add_option("--kind", o.kind)->check(CLI::IsMember(kKinds));
    synth->add_option("--length", o.length);
    synth->add_option("--frequency", o.frequency, "Sine frequency in cycles per sample");
    synth->add_option("--noise-sigma", o.noise_sigma);
    synth->add_option("--sigma", o.sigma, "White-noise standard deviation");

    auto* benchmark = app.add_subcommand("benchmark", "Five-segment benchmark with moving metrics");
    benchmark->add_option("--segment-length", o.segment_length);
    benchmark->add_option("--omega-window", o.omega_window);
    benchmark->add_option("--lambda-window", o.lambda_window);

    auto* sweep = app.add_subcommand("sweep", "Length and sparsity sensitivity sweep");
    sweep->add_option("--generator", o.kind)->check(CLI::IsMember(kKinds));
    sweep->add_option("--metric", o.metric)->check(CLI::IsMember({"omega", "lambda"}));
    sweep->add_option("--lengths", o.lengths)->delimiter(',');
    sweep->add_option("--rates", o.rates)->delimiter(',');
    sweep->add_option("--replicates", o.replicates);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return success;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return success;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return usage_error;
    }

    try {
        Emitter emit(o, out);
        if (analyze->parsed()) run_analyze(o, emit);
        else if (report->parsed()) run_report(o, emit);
        else if (synth->parsed()) run_synth(o, emit);
        else if (benchmark->parsed()) run_benchmark(o, emit);
        else if (sweep->parsed()) run_sweep(o, emit);
        return success;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.category());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return computation_error;
    }
}

}  // namespace fcast::cli
