#include "forecastability/experiments.hpp"

#include <cmath>
#include <limits>

#include "forecastability/error.hpp"
#include "forecastability/random.hpp"

namespace fcast::experiments {

Summary summarize(std::span<const double> values) noexcept {
    Summary s;
    s.count = values.size();
    if (s.count == 0) {
        s.mean = std::numeric_limits<double>::quiet_NaN();
        s.std = std::numeric_limits<double>::quiet_NaN();
        return s;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

std::string_view to_string(Metric m) noexcept {
    return m == Metric::spectral_predictability ? "spectral_predictability" : "largest_lyapunov";
}

const SweepCell* SweepResult::find(std::size_t length, double rate) const noexcept {
    for (const auto& c : cells) {
        if (c.length == length && c.sparsity_rate == rate) return &c;
    }
    return nullptr;
}

ReplicateOutcome evaluate_replicate(const SweepSpec& spec, std::size_t length, double rate,
                                    std::size_t replicate) {
    const std::uint64_t seed = spec.base_seed + replicate;
    synth::SignalSpec signal = synth::randomized(spec.generator, seed);
    signal.length = length;
    const TimeSeries series =
        synth::sparsify(synth::generate(signal), rate, derive_seed(seed, streams::sparsify));
    ReplicateOutcome out{std::nullopt, sparsity_of(series)};
    try {
        out.value = spec.metric == Metric::spectral_predictability
                        ? spectral::spectral_predictability(series, spec.spectral)
                        : lyapunov::largest_lyapunov(series, spec.embedding).lambda;
    } catch (const Error& e) {
        switch (e.code()) {
            case Errc::estimation_impossible:
            case Errc::embedding_infeasible:
            case Errc::series_too_short:
                break;
            default:
                throw;
        }
    }
    return out;
}

SweepResult run_sweep(const SweepSpec& spec, Parallelism par) {
    if (spec.lengths.empty() || spec.sparsity_rates.empty() || spec.replicates == 0) {
        throw Error(Errc::invalid_config, "sweep needs lengths, sparsity rates and at least one replicate");
    }
    if (spec.metric == Metric::largest_lyapunov) spec.embedding.validate();

    const std::size_t cells = spec.lengths.size() * spec.sparsity_rates.size();
    const std::size_t tasks = cells * spec.replicates;
    std::vector<std::optional<double>> values(tasks);
    std::vector<char> high_sparsity(tasks, 0);

    parallel_for(tasks, par, [&](std::size_t task) {
        const std::size_t cell = task / spec.replicates;
        const std::size_t r = task % spec.replicates;
        const std::size_t length = spec.lengths[cell / spec.sparsity_rates.size()];
        const double rate = spec.sparsity_rates[cell % spec.sparsity_rates.size()];
        const auto outcome = evaluate_replicate(spec, length, rate, r);
        values[task] = outcome.value;
        high_sparsity[task] = spec.metric == Metric::largest_lyapunov && outcome.sparsity > lyapunov::kMaxSparsity;
    });

    SweepResult result;
    result.cells.reserve(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        SweepCell c;
        c.length = spec.lengths[cell / spec.sparsity_rates.size()];
        c.sparsity_rate = spec.sparsity_rates[cell % spec.sparsity_rates.size()];
        std::vector<double> ok;
        for (std::size_t r = 0; r < spec.replicates; ++r) {
            const auto& v = values[cell * spec.replicates + r];
            if (v) ok.push_back(*v);
            c.high_sparsity_count += static_cast<std::size_t>(high_sparsity[cell * spec.replicates + r]);
        }
        const Summary s = summarize(ok);
        c.mean = s.mean;
        c.std = s.std;
        c.replicate_count = ok.size();
        c.failure_count = spec.replicates - ok.size();
        c.short_series = spec.metric == Metric::largest_lyapunov &&
                         c.length < lyapunov::kSamplesPerDimension * spec.embedding.embedding_dim;
        result.cells.push_back(c);
    }
    return result;
}

namespace {

struct Interval {
    std::size_t begin;
    std::size_t end;
};

void collect(const MovingSeries& moving, std::size_t window, const Interval& inside, std::vector<double>& vals,
             std::size_t& gaps) {
    for (std::size_t k = 0; k < moving.size(); ++k) {
        const auto last = static_cast<std::size_t>(moving.stamps[k]);
        const std::size_t first = last + 1 - window;
        if (first >= inside.begin && last < inside.end) {
            if (moving.values[k]) vals.push_back(*moving.values[k]);
            else ++gaps;
        }
    }
}

void collect_straddling(const MovingSeries& moving, std::size_t window, std::size_t boundary,
                        std::vector<double>& vals, std::size_t& gaps) {
    for (std::size_t k = 0; k < moving.size(); ++k) {
        const auto last = static_cast<std::size_t>(moving.stamps[k]);
        const std::size_t first = last + 1 - window;
        if (first < boundary && last >= boundary) {
            if (moving.values[k]) vals.push_back(*moving.values[k]);
            else ++gaps;
        }
    }
}

}  // namespace

SegmentReport segment_metrics(const synth::Benchmark& benchmark, const SegmentConfig& config, Parallelism par) {
    const std::size_t total = benchmark.series.size();
    std::vector<Interval> segments;
    std::size_t begin = 0;
    for (std::size_t b : benchmark.boundaries) {
        segments.push_back({begin, b});
        begin = b;
    }
    segments.push_back({begin, total});
    for (const auto& s : segments) {
        if (config.omega_plan.window_size > s.end - s.begin || config.lambda_plan.window_size > s.end - s.begin) {
            throw Error(Errc::window_too_large, "window sizes must not exceed the segment length");
        }
    }

    SegmentReport report;
    report.omega = spectral::moving_spectral_predictability(benchmark.series, config.omega_plan, config.spectral, par);
    report.lambda = lyapunov::moving_lyapunov(benchmark.series, config.lambda_plan, config.embedding, par);

    for (std::size_t i = 0; i < segments.size(); ++i) {
        SegmentSummary s;
        s.name = i < benchmark.segment_names.size() ? benchmark.segment_names[i] : "segment_" + std::to_string(i + 1);
        s.begin = segments[i].begin;
        s.end = segments[i].end;
        std::vector<double> omega;
        std::vector<double> lambda;
        std::size_t omega_gaps = 0;
        collect(report.omega, config.omega_plan.window_size, segments[i], omega, omega_gaps);
        collect(report.lambda, config.lambda_plan.window_size, segments[i], lambda, s.lambda_gaps);
        s.omega = summarize(omega);
        s.lambda = summarize(lambda);
        report.segments.push_back(std::move(s));
    }
    for (std::size_t b : benchmark.boundaries) {
        BoundarySummary s;
        s.index = b;
        std::vector<double> omega;
        std::vector<double> lambda;
        std::size_t omega_gaps = 0;
        collect_straddling(report.omega, config.omega_plan.window_size, b, omega, omega_gaps);
        collect_straddling(report.lambda, config.lambda_plan.window_size, b, lambda, s.lambda_gaps);
        s.omega = summarize(omega);
        s.lambda = summarize(lambda);
        report.boundaries.push_back(std::move(s));
    }
    return report;
}

}  // namespace fcast::experiments
