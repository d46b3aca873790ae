#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "forecastability/experiments.hpp"
#include "forecastability/ingest.hpp"
#include "forecastability/lyapunov.hpp"
#include "forecastability/report.hpp"
#include "forecastability/spectral.hpp"
#include "forecastability/synth.hpp"

namespace fcast::config {

using Json = nlohmann::ordered_json;

/// Everything a CLI run can be told declaratively. Top-level `spectral` and
/// `embedding` apply to every command; sections that are absent keep their
/// defaults.
struct RunConfig {
    spectral::SpectralConfig spectral{};
    lyapunov::EmbeddingConfig embedding{};
    std::optional<ingest::HierarchySpec> hierarchy;
    ingest::CsvSchema schema{};
    synth::SignalSpec signal{};
    experiments::SweepSpec sweep{};
    synth::BenchmarkSpec benchmark{};
    WindowPlan omega_plan{200, 1};
    WindowPlan lambda_plan{300, 1};
    report::ReportConfig report{};

    /// Copies of the nested configs with the shared spectral and embedding
    /// settings filled in.
    [[nodiscard]] experiments::SweepSpec sweep_spec() const;
    [[nodiscard]] experiments::SegmentConfig segment_config() const;
    [[nodiscard]] report::ReportConfig report_config() const;
};

/// Unknown keys, wrong types and out-of-range values throw invalid_config.
[[nodiscard]] RunConfig parse_config(const Json& doc);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

[[nodiscard]] Json to_json(const spectral::SpectralConfig& c);
[[nodiscard]] Json to_json(const lyapunov::EmbeddingConfig& c);
[[nodiscard]] Json to_json(const ingest::HierarchySpec& h);
[[nodiscard]] Json to_json(const synth::LorenzParams& p);
[[nodiscard]] Json to_json(const synth::SignalSpec& s);
[[nodiscard]] Json to_json(const experiments::SweepSpec& s);
[[nodiscard]] Json to_json(const synth::BenchmarkSpec& b);
[[nodiscard]] Json to_json(const experiments::SegmentConfig& c);
[[nodiscard]] Json to_json(const report::ReportConfig& c);
[[nodiscard]] Json to_json(const RunConfig& c);

}  // namespace fcast::config
