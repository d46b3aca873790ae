#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forecastability/experiments.hpp"
#include "forecastability/ingest.hpp"
#include "forecastability/lyapunov.hpp"
#include "forecastability/parallel.hpp"
#include "forecastability/spectral.hpp"

namespace fcast::report {

/// sum |a - f| / sum |a|. Throws undefined_denominator when all actuals are 0.
[[nodiscard]] double wape(std::span<const double> actuals, std::span<const double> forecasts);

/// Sample Pearson correlation. Throws undefined_correlation when either input
/// has zero variance.
[[nodiscard]] double pearson_r(std::span<const double> x, std::span<const double> y);

/// One line of an error file: `series_id,model,wape[,frequency]`. Without a
/// frequency the value joins every frequency of that series.
struct ErrorRecord {
    std::string series_id;
    std::string model;
    double wape = 0.0;
    std::optional<Frequency> frequency;
};

[[nodiscard]] std::vector<ErrorRecord> parse_error_csv(std::istream& in, std::string_view source = "<stream>");
[[nodiscard]] std::vector<ErrorRecord> load_error_csv(const std::filesystem::path& path);

/// Low-forecastability cut-offs.
struct Thresholds {
    double omega_below = 0.2;
    double lambda_above = 1.0;
};

[[nodiscard]] bool low_forecastability(std::optional<double> omega, std::optional<double> lambda,
                                       const Thresholds& thresholds = {}) noexcept;

struct ReportConfig {
    spectral::SpectralConfig spectral{};
    lyapunov::EmbeddingConfig embedding{};
    std::vector<Frequency> frequencies{Frequency::daily, Frequency::weekly};
    Thresholds thresholds{};
    /// White-noise draws averaged for each matched-length baseline.
    std::size_t baseline_replicates = 20;
    std::uint64_t seed = 0;
    /// Also report 1 - H / log(2 pi) per row.
    bool emit_log2pi_variant = false;
};

struct ReportRow {
    std::string level;
    std::size_t level_index = 0;
    Frequency frequency = Frequency::daily;
    std::string series_id;
    std::size_t length = 0;
    double sparsity = 0.0;
    std::optional<double> omega;
    std::optional<double> omega_log2pi;
    std::optional<double> lambda;
    std::size_t pair_count = 0;
    std::size_t skipped_pairs = 0;
    lyapunov::Sufficiency sufficiency = lyapunov::Sufficiency::ok;
    std::optional<double> baseline_omega;
    bool low_forecastability = false;
    std::string note;
    std::map<std::string, double> errors;  ///< model -> joined error
};

struct LevelSummary {
    std::string level;
    Frequency frequency = Frequency::daily;
    std::size_t series_count = 0;
    experiments::Summary omega;
    experiments::Summary lambda;
    std::size_t lambda_gaps = 0;
};

struct Correlation {
    std::string scope;  ///< "pooled" or a level name
    Frequency frequency = Frequency::daily;
    std::string model;
    std::string metric;  ///< "omega" or "lambda"
    std::size_t points = 0;
    std::optional<double> r;
    std::string status;  ///< "ok" or why it was skipped
};

struct MetricReport {
    ReportConfig config;
    std::vector<std::string> level_names;
    std::vector<ReportRow> rows;  ///< level order, then frequency, then series id
    std::vector<LevelSummary> level_summaries;
    std::vector<Correlation> correlations;
    std::vector<std::string> warnings;
};

/// Minimum joined points for a correlation to be reported.
inline constexpr std::size_t kMinCorrelationPoints = 3;

/// Mean Omega of white noise with the given length and number of zeros.
[[nodiscard]] std::optional<double> white_noise_baseline(std::size_t length, std::size_t zeros,
                                                         const ReportConfig& config);

[[nodiscard]] MetricReport build_report(const std::vector<ingest::LevelSeries>& levels, const ReportConfig& config,
                                        const std::vector<ErrorRecord>* errors = nullptr, Parallelism par = {});

}  // namespace fcast::report
