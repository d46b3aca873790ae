// Acceptance checks, one per criterion. Prints a PASS/FAIL/SKIP line for
// each and exits 0 (pass), 1 (fail) or 77 (skip) for a single criterion.

#include <CLI11.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "forecastability/error.hpp"
#include "forecastability/experiments.hpp"
#include "forecastability/ingest.hpp"
#include "forecastability/lyapunov.hpp"
#include "forecastability/random.hpp"
#include "forecastability/report.hpp"
#include "forecastability/spectral.hpp"
#include "forecastability/synth.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace fcast;

namespace {

enum class Outcome { pass, fail, skip };

struct Verdict {
    Outcome outcome = Outcome::pass;
    std::string detail;
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream s;
    s.precision(digits);
    s << v;
    return s.str();
}

Verdict verdict(bool ok, std::string detail) { return {ok ? Outcome::pass : Outcome::fail, std::move(detail)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Parallelism threads() { return Parallelism::hardware(); }

bool bit_equal(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

std::vector<double> gaussian(std::size_t n, Rng& rng, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

// --- 1 ---------------------------------------------------------------------

Verdict analytic_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const double constant = spectral::spectral_predictability(std::vector<double>(256, 3.25));
    const double uniform = spectral::predictability_of(spectral::PowerDistribution::uniform(128), std::numbers::e);
    const auto three = spectral::PowerDistribution::from_power({0.5, 0.25, 0.25});
    const double entropy = spectral::spectral_entropy(three, 2.0);
    const double elapsed = seconds_since(t0);
    const bool ok = constant == 1.0 && std::abs(uniform) < 1e-12 && std::abs(entropy - 1.5) < 1e-12 && elapsed < 1.0;
    return verdict(ok, "Omega(constant)=" + fmt(constant, 17) + " Omega(uniform)=" + fmt(uniform, 17) +
                           " H([.5,.25,.25],2)=" + fmt(entropy, 17) + " time=" + fmt(elapsed, 3) + "s");
}

// --- 2, 3 --------------------------------------------------------------------

struct SegmentMeans {
    std::vector<double> omega;
    std::vector<double> lambda;
};

SegmentMeans benchmark_means(std::size_t seeds) {
    SegmentMeans acc{std::vector<double>(5, 0.0), std::vector<double>(5, 0.0)};
    experiments::SegmentConfig cfg;
    cfg.omega_plan = {200, 1};
    cfg.lambda_plan = {300, 1};
    for (std::size_t seed = 1; seed <= seeds; ++seed) {
        const auto bench = synth::five_segment_benchmark(500, seed);
        const auto rep = experiments::segment_metrics(bench, cfg, threads());
        for (std::size_t s = 0; s < 5; ++s) {
            acc.omega[s] += rep.segments[s].omega.mean / static_cast<double>(seeds);
            acc.lambda[s] += rep.segments[s].lambda.mean / static_cast<double>(seeds);
        }
    }
    return acc;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], 4);
    return s + "]";
}

Verdict omega_ordering() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto means = benchmark_means(20);
    bool ok = true;
    double min_gap = 1e300;
    for (std::size_t s = 1; s < 5; ++s) {
        const double gap = means.omega[s - 1] - means.omega[s];
        min_gap = std::min(min_gap, gap);
        ok = ok && gap > 0.01;
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 120.0;
    return verdict(ok, "segment Omega " + list(means.omega) + " min gap=" + fmt(min_gap, 4) +
                           " time=" + fmt(elapsed, 3) + "s");
}

Verdict lambda_ordering() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto means = benchmark_means(20);
    const auto& l = means.lambda;
    const bool noise_max = std::max_element(l.begin(), l.end()) == l.begin() + 4;
    const double elapsed = seconds_since(t0);
    const bool ok = l[0] <= 0.05 && l[3] > l[0] && noise_max && elapsed < 300.0;
    return verdict(ok, "segment lambda " + list(l) + " time=" + fmt(elapsed, 3) + "s");
}

// --- 4 ---------------------------------------------------------------------

Verdict lorenz_quantitative() {
    const auto t0 = std::chrono::steady_clock::now();
    const synth::LorenzParams params{};
    const auto series = synth::gen_lorenz(30000, params);
    lyapunov::EmbeddingConfig cfg;
    cfg.embedding_dim = 3;
    cfg.delay = 10;
    cfg.horizon = 10;
    const auto est = lyapunov::largest_lyapunov(series, cfg, threads());
    const double sample_dt = params.dt * static_cast<double>(params.sample_every);
    const double per_time = est.lambda / sample_dt;
    const double reference =
        oracle::benettin_lorenz({params.sigma, params.rho, params.beta}, params.initial_state, params.dt, 1000, 200000);
    const double elapsed = seconds_since(t0);
    const bool ok = per_time >= 0.5 && per_time <= 1.4 && elapsed < 180.0;
    return verdict(ok, "lambda/dt=" + fmt(per_time, 5) + " (pairs=" + std::to_string(est.pair_count) +
                           ") variational oracle=" + fmt(reference, 5) + " time=" + fmt(elapsed, 3) + "s");
}

// --- 5, 6 ------------------------------------------------------------------

Verdict omega_sensitivity() {
    const auto t0 = std::chrono::steady_clock::now();
    experiments::SweepSpec sine;
    sine.generator.kind = synth::SignalKind::sine;
    sine.lengths = {300};
    sine.sparsity_rates = {0.0, 0.9};
    sine.replicates = 100;
    sine.base_seed = 1;
    const auto a = experiments::run_sweep(sine, threads());
    const double dense = a.find(300, 0.0)->mean;
    const double sparse = a.find(300, 0.9)->mean;

    experiments::SweepSpec noise;
    noise.generator.kind = synth::SignalKind::white_noise;
    noise.lengths = {256, 8192};
    noise.sparsity_rates = {0.0};
    noise.replicates = 100;
    noise.base_seed = 1;
    const auto b = experiments::run_sweep(noise, threads());
    const double short_noise = b.find(256, 0.0)->mean;
    const double long_noise = b.find(8192, 0.0)->mean;

    const double elapsed = seconds_since(t0);
    const bool ok = sparse < 0.5 * dense && long_noise < short_noise && elapsed < 120.0;
    return verdict(ok, "sine Omega(0.0)=" + fmt(dense) + " Omega(0.9)=" + fmt(sparse) + "; noise Omega(256)=" +
                           fmt(short_noise) + " Omega(8192)=" + fmt(long_noise) + " time=" + fmt(elapsed, 3) + "s");
}

Verdict lambda_sensitivity() {
    const auto t0 = std::chrono::steady_clock::now();
    experiments::SweepSpec spec;
    spec.generator.kind = synth::SignalKind::multisine;
    spec.lengths = {300};
    spec.sparsity_rates = {0.0, 0.6, 0.8, 0.95};
    spec.replicates = 100;
    spec.metric = experiments::Metric::largest_lyapunov;
    spec.base_seed = 1;
    const auto r = experiments::run_sweep(spec, threads());
    const double l0 = r.find(300, 0.0)->mean;
    const double l6 = r.find(300, 0.6)->mean;
    const double l8 = r.find(300, 0.8)->mean;
    const double l95 = r.find(300, 0.95)->mean;
    const double elapsed = seconds_since(t0);
    const bool ok = l6 > l0 && l95 < l8 && elapsed < 600.0;
    return verdict(ok, "multisine lambda(0)=" + fmt(l0) + " (0.6)=" + fmt(l6) + " (0.8)=" + fmt(l8) +
                           " (0.95)=" + fmt(l95) + " failures(0.95)=" +
                           std::to_string(r.find(300, 0.95)->failure_count) + " time=" + fmt(elapsed, 3) + "s");
}

// --- 7 ---------------------------------------------------------------------

Verdict invariance_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr std::size_t kCases = 1000;
    Rng rng(derive_seed(7, 1));
    double worst_amp = 0.0;
    double worst_scale = 0.0;
    double worst_base = 0.0;
    std::size_t shift_mismatch = 0;
    std::size_t lambda_cases = 0;

    for (std::size_t c = 0; c < kCases; ++c) {
        const std::size_t n = 16 + rng.uniform_index(497);
        const auto y = gaussian(n, rng, 0.1 + 10.0 * rng.uniform01());
        const double base = spectral::spectral_predictability(y);
        for (double k : {0.1, 3.0, 1000.0}) {
            std::vector<double> scaled(y);
            for (auto& v : scaled) v *= k;
            worst_amp = std::max(worst_amp, std::abs(spectral::spectral_predictability(scaled) - base));
        }
        spectral::SpectralConfig two;
        two.log_base = 2.0;
        worst_base = std::max(worst_base, std::abs(spectral::spectral_predictability(y, two) - base));
    }

    for (std::size_t c = 0; c < kCases; ++c) {
        const std::size_t n = 64 + rng.uniform_index(257);
        // Values on a 1/1024 grid keep every shifted difference exactly representable.
        std::vector<double> grid(n);
        for (auto& v : grid) v = static_cast<double>(static_cast<std::int64_t>(rng.uniform_index(1u << 16)) - 32768) / 1024.0;
        const double shift = static_cast<double>(static_cast<std::int64_t>(rng.uniform_index(1u << 20)) - 524288) / 1024.0;
        std::vector<double> shifted(grid);
        for (auto& v : shifted) v += shift;
        std::vector<double> general = gaussian(n, rng);
        const double k = std::exp(rng.uniform01() * 8.0 - 4.0);
        std::vector<double> scaled(general);
        for (auto& v : scaled) v *= k;
        try {
            const auto a = lyapunov::largest_lyapunov(grid);
            const auto b = lyapunov::largest_lyapunov(shifted);
            if (!bit_equal(a.lambda, b.lambda) || a.pair_count != b.pair_count) ++shift_mismatch;
            const auto g = lyapunov::largest_lyapunov(general);
            const auto s = lyapunov::largest_lyapunov(scaled);
            worst_scale = std::max(worst_scale, std::abs(g.lambda - s.lambda));
            ++lambda_cases;
        } catch (const Error&) {
            ++shift_mismatch;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool ok = worst_amp < 1e-9 && worst_base < 1e-9 && worst_scale < 1e-9 && shift_mismatch == 0 &&
                    lambda_cases == kCases && elapsed < 60.0;
    return verdict(ok, "max|dOmega| amplitude=" + fmt(worst_amp, 3) + " base=" + fmt(worst_base, 3) +
                           "; lambda shift mismatches=" + std::to_string(shift_mismatch) +
                           " max|dlambda| scale=" + fmt(worst_scale, 3) + " over " + std::to_string(kCases) +
                           " cases each, time=" + fmt(elapsed, 3) + "s");
}

// --- 8 ---------------------------------------------------------------------

std::vector<double> random_series(std::size_t kind, std::size_t n, Rng& rng) {
    std::vector<double> y = gaussian(n, rng);
    switch (kind % 5) {
        case 0:
            break;
        case 1:  // sparse
            for (auto& v : y) {
                if (rng.uniform01() < 0.7) v = 0.0;
            }
            break;
        case 2:  // coarse integer levels: many exact distance ties
            for (auto& v : y) v = std::round(v * 2.0);
            break;
        case 3: {
            synth::LorenzParams p;
            p.initial_state = {1.0 + rng.uniform01(), 1.0, 1.0};
            p.sample_every = 5;
            const auto l = synth::gen_lorenz(n, p);
            y.assign(l.values().begin(), l.values().end());
            break;
        }
        default:
            for (std::size_t t = 0; t < n; ++t) y[t] += 3.0 * std::sin(0.05 * static_cast<double>(t));
    }
    return y;
}

Verdict oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(derive_seed(8, 1));
    std::size_t lambda_mismatch = 0;
    std::size_t compared = 0;
    for (std::size_t c = 0; c < 50; ++c) {
        const std::size_t n = 100 + rng.uniform_index(901);
        const auto y = random_series(c, n, rng);
        lyapunov::EmbeddingConfig cfg;
        cfg.embedding_dim = 2 + rng.uniform_index(4);
        cfg.delay = 1 + rng.uniform_index(4);
        cfg.horizon = 1 + rng.uniform_index(10);
        auto exhaustive = cfg;
        exhaustive.search = lyapunov::NeighborSearch::exhaustive;
        auto tree = cfg;
        tree.search = lyapunov::NeighborSearch::kd_tree;
        std::optional<lyapunov::LyapunovEstimate> a;
        std::optional<lyapunov::LyapunovEstimate> b;
        try { a = lyapunov::largest_lyapunov(y, exhaustive); } catch (const Error&) {}
        try { b = lyapunov::largest_lyapunov(y, tree); } catch (const Error&) {}
        ++compared;
        if (a.has_value() != b.has_value()) {
            ++lambda_mismatch;
        } else if (a && (!bit_equal(a->lambda, b->lambda) || a->pair_count != b->pair_count ||
                         a->skipped_pairs != b->skipped_pairs)) {
            ++lambda_mismatch;
        }
    }

    std::size_t embed_mismatch = 0;
    for (std::size_t c = 0; c < 200; ++c) {
        const std::size_t n = 1 + rng.uniform_index(300);
        const std::size_t m = 1 + rng.uniform_index(8);
        const std::size_t tau = 1 + rng.uniform_index(20);
        const auto y = gaussian(n, rng);
        const bool feasible = n > (m - 1) * tau;
        try {
            const auto e = lyapunov::delay_embed(y, m, tau);
            const auto ref = oracle::brute_force_embed(y, m, tau);
            bool same = feasible && e.size() == ref.size() && e.dim() == m;
            for (std::size_t t = 0; same && t < ref.size(); ++t) {
                for (std::size_t j = 0; j < m; ++j) same = same && bit_equal(e.state(t)[j], ref[t][j]);
            }
            if (!same) ++embed_mismatch;
        } catch (const Error& err) {
            if (feasible || err.code() != Errc::embedding_infeasible) ++embed_mismatch;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool ok = lambda_mismatch == 0 && embed_mismatch == 0 && elapsed < 120.0;
    return verdict(ok, "lambda exhaustive vs kd-tree mismatches=" + std::to_string(lambda_mismatch) + "/" +
                           std::to_string(compared) + "; delay_embed mismatches=" + std::to_string(embed_mismatch) +
                           "/200 time=" + fmt(elapsed, 3) + "s");
}

// --- 9 ---------------------------------------------------------------------

std::map<std::string, std::string> read_tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        files[fs::relative(entry.path(), dir).string()] = s.str();
    }
    return files;
}

Verdict pipeline_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path root = fs::temp_directory_path() / "fcast_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);

    const auto input = root / "sales.csv";
    {
        std::ofstream out(input);
        out << "series_id,store,t,value\n";
        Rng rng(derive_seed(9, 1));
        for (int s = 0; s < 12; ++s) {
            for (int t = 0; t < 140; ++t) {
                const double level = 5.0 + 4.0 * std::sin(0.9 * t + s);
                const double v = rng.uniform01() < 0.3 ? 0.0 : std::floor(level + 2.0 * rng.uniform01());
                out << "item" << s << ",store" << s % 3 << "," << t << "," << v << "\n";
            }
        }
    }
    const auto errors = root / "errors.csv";
    {
        std::ofstream out(errors);
        out << "series_id,model,wape\n";
        for (int s = 0; s < 3; ++s) out << "store" << s << ",naive," << 0.3 + 0.1 * s << "\n";
        out << "total,naive,0.2\n";
    }

    const std::vector<std::vector<std::string>> commands = {
        {"benchmark", "--segment-length", "400", "--seed", "3"},
        {"sweep", "--generator", "multisine", "--metric", "lambda", "--lengths", "150,300", "--rates", "0,0.5,0.9",
         "--replicates", "10", "--seed", "3"},
        {"report", input.string(), "--errors", errors.string(), "--seed", "3"},
    };

    std::string problems;
    for (const auto& cmd : commands) {
        std::vector<std::map<std::string, std::string>> outputs;
        for (const auto& [run, threads_flag] : std::vector<std::pair<std::string, std::string>>{
                 {"a", "1"}, {"b", "1"}, {"c", "8"}}) {
            const auto dir = root / (cmd[0] + "_" + run);
            auto args = cmd;
            args.insert(args.end(), {"--threads", threads_flag, "--out", dir.string()});
            std::ostringstream out;
            std::ostringstream err;
            const int code = cli::run(args, out, err);
            if (code != 0) problems += " " + cmd[0] + " exit " + std::to_string(code) + ": " + err.str();
            outputs.push_back(read_tree(dir));
        }
        if (outputs[0].empty()) problems += " " + cmd[0] + " wrote nothing";
        if (outputs[0] != outputs[1]) problems += " " + cmd[0] + " differs between runs";
        if (outputs[0] != outputs[2]) problems += " " + cmd[0] + " differs between 1 and 8 threads";
    }
    fs::remove_all(root);
    const double elapsed = seconds_since(t0);
    return verdict(problems.empty(), (problems.empty() ? std::string("benchmark, sweep, report byte-identical") : problems) +
                                         " time=" + fmt(elapsed, 3) + "s");
}

// --- 10 --------------------------------------------------------------------

Verdict planted_correlation() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<TimeSeries> series;
    for (std::size_t i = 0; i < 200; ++i) {
        // Noise level sweeps from a clean tone to nearly pure noise.
        const double sigma = 0.02 * static_cast<double>(i);
        auto s = synth::add_gaussian_noise(synth::gen_sine(256, 0.05 + 0.001 * static_cast<double>(i % 50)), sigma,
                                           derive_seed(10, i));
        char id[16];
        std::snprintf(id, sizeof id, "s%03zu", i);
        series.emplace_back(id, std::vector<double>(s.values().begin(), s.values().end()), 0, Frequency::daily);
    }
    const std::vector<ingest::LevelSeries> levels{{"series", series}};
    report::ReportConfig cfg;
    cfg.frequencies = {Frequency::daily};
    cfg.baseline_replicates = 0;
    const auto first = report::build_report(levels, cfg, nullptr, threads());

    std::vector<report::ErrorRecord> errors;
    Rng rng(derive_seed(10, 999));
    for (const auto& row : first.rows) {
        errors.push_back({row.series_id, "planted", 1.0 - *row.omega, std::nullopt});
        errors.push_back({row.series_id, "random", rng.uniform01(), std::nullopt});
    }
    const auto second = report::build_report(levels, cfg, &errors, threads());
    std::optional<double> planted;
    std::optional<double> random;
    for (const auto& c : second.correlations) {
        if (c.scope != "pooled" || c.metric != "omega") continue;
        if (c.model == "planted") planted = c.r;
        if (c.model == "random") random = c.r;
    }
    const double elapsed = seconds_since(t0);
    const bool ok = planted && random && std::abs(*planted + 1.0) < 1e-9 && std::abs(*random) < 0.3;
    return verdict(ok, "r(planted)=" + (planted ? fmt(*planted, 15) : std::string("none")) +
                           " r(random)=" + (random ? fmt(*random, 4) : std::string("none")) + " over " +
                           std::to_string(first.rows.size()) + " series, time=" + fmt(elapsed, 3) + "s");
}

// --- 11 --------------------------------------------------------------------

Verdict sales_dataset() {
    const char* path = std::getenv("FORECASTABILITY_M5_SALES");
    if (path == nullptr || !fs::exists(path)) {
        return {Outcome::skip, "set FORECASTABILITY_M5_SALES to a wide sales file to run"};
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto dataset = ingest::load_wide_csv(path);
    const auto hierarchy = ingest::HierarchySpec::from_dimensions(dataset.dimensions);
    const auto levels = ingest::aggregate_levels(dataset, hierarchy);
    report::ReportConfig cfg;
    cfg.baseline_replicates = 0;
    const auto rep = report::build_report(levels, cfg, nullptr, threads());

    auto summary = [&](std::size_t level, Frequency f) -> const report::LevelSummary* {
        for (const auto& s : rep.level_summaries) {
            if (s.level == rep.level_names.at(level) && s.frequency == f) return &s;
        }
        return nullptr;
    };
    if (rep.level_names.size() < 4) return {Outcome::fail, "expected at least 4 levels"};
    std::vector<double> daily;
    for (std::size_t l = 0; l < 4; ++l) daily.push_back(summary(l, Frequency::daily)->omega.mean);
    bool decreasing = true;
    for (std::size_t l = 1; l < 4; ++l) decreasing = decreasing && daily[l] < daily[l - 1];
    const double weekly_l3 = summary(3, Frequency::weekly)->lambda.mean;
    const double daily_l3 = summary(3, Frequency::daily)->lambda.mean;
    const bool ok = std::abs(daily[0] - 0.374) <= 0.05 && decreasing && weekly_l3 < daily_l3;
    return verdict(ok, "daily level Omega " + list(daily) + "; L3 lambda weekly=" + fmt(weekly_l3, 4) +
                           " daily=" + fmt(daily_l3, 4) + " time=" + fmt(seconds_since(t0), 3) + "s");
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Verdict()>>> all = {
        {"analytic exactness", analytic_exactness},
        {"benchmark Omega ordering", omega_ordering},
        {"benchmark lambda ordering", lambda_ordering},
        {"Lorenz exponent per unit time", lorenz_quantitative},
        {"Omega sparsity and length sensitivity", omega_sensitivity},
        {"lambda sparsity sensitivity", lambda_sensitivity},
        {"invariance suite", invariance_suite},
        {"neighbor search and embedding oracles", oracle_equivalence},
        {"pipeline determinism", pipeline_determinism},
        {"planted correlation", planted_correlation},
        {"sales dataset levels", sales_dataset},
    };
    return all;
}

Outcome run_one(std::size_t n) {
    const auto& [name, fn] = criteria().at(n - 1);
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v = {Outcome::fail, std::string("threw: ") + e.what()};
    }
    const char* tag = v.outcome == Outcome::pass ? "PASS" : v.outcome == Outcome::fail ? "FAIL" : "SKIP";
    std::cout << tag << " criterion " << n << " (" << name << "): " << v.detail << std::endl;
    return v.outcome;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::size_t only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    if (only != 0) {
        switch (run_one(only)) {
            case Outcome::pass: return 0;
            case Outcome::skip: return 77;
            case Outcome::fail: return 1;
        }
    }
    bool failed = false;
    for (std::size_t n = 1; n <= criteria().size(); ++n) failed = run_one(n) == Outcome::fail || failed;
    return failed ? 1 : 0;
}
