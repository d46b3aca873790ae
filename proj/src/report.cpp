#include "forecastability/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>

#include "forecastability/error.hpp"
#include "forecastability/random.hpp"
#include "forecastability/synth.hpp"

namespace fcast::report {

double wape(std::span<const double> actuals, std::span<const double> forecasts) {
    if (actuals.empty() || actuals.size() != forecasts.size()) {
        throw Error(Errc::degenerate_input, "WAPE needs equal, non-zero lengths");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        num += std::abs(actuals[i] - forecasts[i]);
        den += std::abs(actuals[i]);
    }
    if (den == 0.0) throw Error(Errc::undefined_denominator, "WAPE of all-zero actuals");
    return num / den;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(Errc::degenerate_input, "correlation needs two equal-length inputs of at least 2 points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw Error(Errc::undefined_correlation, "an input has zero variance");
    // sqrt(sxx) * sqrt(syy) rather than sqrt(sxx * syy) keeps r(x, y) == r(y, x).
    return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

std::vector<ErrorRecord> parse_error_csv(std::istream& in, std::string_view source) {
    std::string line;
    if (!std::getline(in, line)) throw Error(Errc::malformed_csv, std::string(source) + ": empty error file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = ingest::split_csv_line(line, 1);
    auto col = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto id_col = col("series_id");
    const auto model_col = col("model");
    const auto wape_col = col("wape");
    const auto freq_col = col("frequency");
    if (!id_col || !model_col || !wape_col) {
        throw Error(Errc::unmapped_column, std::string(source) + ": error file header must be series_id,model,wape");
    }

    std::vector<ErrorRecord> out;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = ingest::split_csv_line(line, line_no);
        const std::string at = std::string(source) + ":" + std::to_string(line_no);
        if (f.size() != header.size()) throw Error(Errc::malformed_csv, at + ": wrong field count");
        ErrorRecord rec;
        rec.series_id = f[*id_col];
        rec.model = f[*model_col];
        const std::string& w = f[*wape_col];
        const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), rec.wape);
        if (w.empty() || ec != std::errc() || ptr != w.data() + w.size()) {
            throw Error(Errc::malformed_csv, at + ": cannot parse error value '" + w + "'");
        }
        if (!std::isfinite(rec.wape)) throw Error(Errc::non_finite, at + ": non-finite error value");
        std::string freq_text;
        if (freq_col && !f[*freq_col].empty()) {
            freq_text = f[*freq_col];
            rec.frequency = parse_frequency(freq_text);
            if (!rec.frequency) throw Error(Errc::malformed_csv, at + ": unknown frequency '" + freq_text + "'");
        }
        if (!seen.emplace(rec.series_id, rec.model, freq_text).second) {
            throw Error(Errc::duplicate_key, at + ": duplicate (" + rec.series_id + ", " + rec.model + ")");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<ErrorRecord> load_error_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    return parse_error_csv(in, path.string());
}

bool low_forecastability(std::optional<double> omega, std::optional<double> lambda,
                         const Thresholds& thresholds) noexcept {
    return (omega && *omega < thresholds.omega_below) || (lambda && *lambda > thresholds.lambda_above);
}

std::optional<double> white_noise_baseline(std::size_t length, std::size_t zeros, const ReportConfig& config) {
    if (length < 4 || config.baseline_replicates == 0) return std::nullopt;
    double sum = 0.0;
    for (std::size_t r = 0; r < config.baseline_replicates; ++r) {
        const std::uint64_t seed = derive_seed(config.seed + r, streams::baseline);
        const TimeSeries noise = synth::zero_random_positions(synth::gen_white_noise(length, 1.0, seed), zeros,
                                                              derive_seed(seed, streams::sparsify));
        sum += spectral::spectral_predictability(noise, config.spectral);
    }
    return sum / static_cast<double>(config.baseline_replicates);
}

namespace {

struct RowTask {
    std::size_t level;
    Frequency frequency;
    const TimeSeries* source;
};

ReportRow evaluate_row(const RowTask& task, const std::string& level_name, const ReportConfig& config) {
    ReportRow row;
    row.level = level_name;
    row.level_index = task.level;
    row.frequency = task.frequency;
    row.series_id = task.source->id();

    std::optional<TimeSeries> resampled;
    if (task.frequency == Frequency::weekly && task.source->frequency() != Frequency::weekly) {
        resampled = resample_weekly(*task.source);
    }
    const TimeSeries& s = resampled ? *resampled : *task.source;
    row.length = s.size();
    row.sparsity = sparsity_of(s);

    std::vector<std::string> notes;
    try {
        const auto dist = spectral::power_distribution(s, config.spectral);
        row.omega = spectral::predictability_of(dist, config.spectral.log_base);
        if (config.emit_log2pi_variant) row.omega_log2pi = spectral::predictability_log2pi(dist, config.spectral.log_base);
    } catch (const Error& e) {
        if (e.code() != Errc::series_too_short) throw;
        notes.emplace_back("omega: series-too-short");
    }

    row.sufficiency = lyapunov::sufficiency_check(s, config.embedding);
    try {
        const auto est = lyapunov::largest_lyapunov(s, config.embedding);
        row.lambda = est.lambda;
        row.pair_count = est.pair_count;
        row.skipped_pairs = est.skipped_pairs;
    } catch (const Error& e) {
        if (e.code() != Errc::estimation_impossible && e.code() != Errc::embedding_infeasible) throw;
        notes.emplace_back("lambda: " + std::string(to_string(e.code())));
    }

    const auto zeros = static_cast<std::size_t>(std::count(s.values().begin(), s.values().end(), 0.0));
    row.baseline_omega = white_noise_baseline(s.size(), zeros, config);
    row.low_forecastability = low_forecastability(row.omega, row.lambda, config.thresholds);
    for (const auto& n : notes) row.note += (row.note.empty() ? "" : "; ") + n;
    return row;
}

void add_correlation(std::vector<Correlation>& out, Correlation c, const std::vector<double>& metric,
                     const std::vector<double>& error) {
    c.points = metric.size();
    if (c.points < kMinCorrelationPoints) {
        c.status = "skipped: fewer than 3 joined points";
    } else {
        try {
            c.r = pearson_r(metric, error);
            c.status = "ok";
        } catch (const Error& e) {
            if (e.code() != Errc::undefined_correlation) throw;
            c.status = "skipped: zero variance";
        }
    }
    out.push_back(std::move(c));
}

}  // namespace

MetricReport build_report(const std::vector<ingest::LevelSeries>& levels, const ReportConfig& config,
                          const std::vector<ErrorRecord>* errors, Parallelism par) {
    config.embedding.validate();
    MetricReport report;
    report.config = config;
    for (const auto& l : levels) report.level_names.push_back(l.name);

    std::vector<RowTask> tasks;
    for (std::size_t li = 0; li < levels.size(); ++li) {
        for (const Frequency f : config.frequencies) {
            for (const auto& s : levels[li].series) {
                if (f == Frequency::weekly && s.frequency() == Frequency::daily && s.size() < 7) {
                    report.warnings.push_back("series '" + s.id() + "' at level '" + levels[li].name +
                                              "' is shorter than a week; weekly row omitted");
                    continue;
                }
                if (f == Frequency::weekly && s.frequency() != Frequency::daily && s.frequency() != Frequency::weekly) {
                    report.warnings.push_back("series '" + s.id() + "' is not daily; weekly row omitted");
                    continue;
                }
                tasks.push_back({li, f, &s});
            }
        }
    }

    report.rows.resize(tasks.size());
    parallel_for(tasks.size(), par, [&](std::size_t i) {
        report.rows[i] = evaluate_row(tasks[i], levels[tasks[i].level].name, config);
    });

    std::set<std::string> models;
    if (errors != nullptr) {
        std::size_t misses = 0;
        for (const auto& e : *errors) {
            bool matched = false;
            for (auto& row : report.rows) {
                if (row.series_id != e.series_id) continue;
                if (e.frequency && *e.frequency != row.frequency) continue;
                row.errors[e.model] = e.wape;
                matched = true;
            }
            if (matched) models.insert(e.model);
            else ++misses;
        }
        if (misses > 0) {
            report.warnings.push_back(std::to_string(misses) + " of " + std::to_string(errors->size()) +
                                      " error records matched no report row");
        }
    }

    for (std::size_t li = 0; li < levels.size(); ++li) {
        for (const Frequency f : config.frequencies) {
            LevelSummary ls;
            ls.level = levels[li].name;
            ls.frequency = f;
            std::vector<double> omega;
            std::vector<double> lambda;
            for (const auto& row : report.rows) {
                if (row.level_index != li || row.frequency != f) continue;
                ++ls.series_count;
                if (row.omega) omega.push_back(*row.omega);
                if (row.lambda) lambda.push_back(*row.lambda);
                else ++ls.lambda_gaps;
            }
            if (ls.series_count == 0) continue;
            ls.omega = experiments::summarize(omega);
            ls.lambda = experiments::summarize(lambda);
            report.level_summaries.push_back(std::move(ls));
        }
    }

    // Pooled across levels first, then per level, for every frequency, model and metric.
    for (const Frequency f : config.frequencies) {
        for (const auto& model : models) {
            for (const std::string metric : {"omega", "lambda"}) {
                for (std::size_t scope = 0; scope <= levels.size(); ++scope) {
                    const bool pooled = scope == 0;
                    std::vector<double> xs;
                    std::vector<double> ys;
                    for (const auto& row : report.rows) {
                        if (row.frequency != f || (!pooled && row.level_index != scope - 1)) continue;
                        const auto err = row.errors.find(model);
                        const auto& value = metric == "omega" ? row.omega : row.lambda;
                        if (err == row.errors.end() || !value) continue;
                        xs.push_back(*value);
                        ys.push_back(err->second);
                    }
                    Correlation c;
                    c.scope = pooled ? "pooled" : levels[scope - 1].name;
                    c.frequency = f;
                    c.model = model;
                    c.metric = metric;
                    add_correlation(report.correlations, std::move(c), xs, ys);
                }
            }
        }
    }
    return report;
}

}  // namespace fcast::report
