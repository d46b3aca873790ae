#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forecastability/config.hpp"
#include "forecastability/experiments.hpp"
#include "forecastability/report.hpp"
#include "forecastability/synth.hpp"
#include "forecastability/timeseries.hpp"

namespace fcast::output {

using config::Json;

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::string_view kNormalizer = "log_a(N), N = number of retained frequency bins";

/// Nine significant digits; empty for NaN or a missing value.
[[nodiscard]] std::string format_real(double x);
[[nodiscard]] std::string format_real(const std::optional<double>& x);

/// Rounds every float in `doc` to nine significant digits and maps
/// non-finite floats to null.
void normalize_floats(Json& doc);

/// Two-space indented, newline-terminated, floats normalized.
[[nodiscard]] std::string dump(Json doc);

/// Quotes a CSV field when it contains a comma, quote or line break.
[[nodiscard]] std::string csv_field(std::string_view text);

/// Normalizer, RNG identity, version and the shared metric configs.
[[nodiscard]] Json metadata(const spectral::SpectralConfig& spectral, const lyapunov::EmbeddingConfig& embedding);

/// Long format: series_id,t,value.
[[nodiscard]] std::string series_csv(const std::vector<TimeSeries>& series);
[[nodiscard]] Json series_json(const std::vector<TimeSeries>& series);

[[nodiscard]] std::string report_csv(const report::MetricReport& report);
[[nodiscard]] Json report_json(const report::MetricReport& report);

/// length,sparsity,mean,std,n,failures
[[nodiscard]] std::string sweep_csv(const experiments::SweepResult& result);
[[nodiscard]] Json sweep_json(const experiments::SweepSpec& spec, const experiments::SweepResult& result);

/// One line per segment and per boundary.
[[nodiscard]] std::string segments_csv(const experiments::SegmentReport& report);
/// t,value,segment,omega,lambda with empty metric cells before the first full window.
[[nodiscard]] std::string benchmark_series_csv(const synth::Benchmark& benchmark,
                                               const experiments::SegmentReport& report);
[[nodiscard]] Json benchmark_json(const synth::BenchmarkSpec& spec, const experiments::SegmentConfig& config,
                                  const synth::Benchmark& benchmark, const experiments::SegmentReport& report);

/// Writes `contents` to `path`, creating parent directories. Throws io.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace fcast::output
