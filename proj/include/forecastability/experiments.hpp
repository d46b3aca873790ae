#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forecastability/lyapunov.hpp"
#include "forecastability/parallel.hpp"
#include "forecastability/spectral.hpp"
#include "forecastability/synth.hpp"

namespace fcast::experiments {

/// Sample mean and standard deviation (n - 1 denominator; 0 when n == 1).
struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;
};

[[nodiscard]] Summary summarize(std::span<const double> values) noexcept;

enum class Metric { spectral_predictability, largest_lyapunov };

[[nodiscard]] std::string_view to_string(Metric m) noexcept;

struct SweepSpec {
    synth::SignalSpec generator{};
    std::vector<std::size_t> lengths{50, 100, 150, 200, 250, 300};
    std::vector<double> sparsity_rates{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
    std::size_t replicates = 100;
    Metric metric = Metric::spectral_predictability;
    std::uint64_t base_seed = 0;
    spectral::SpectralConfig spectral{};
    lyapunov::EmbeddingConfig embedding{};
};

struct SweepCell {
    std::size_t length = 0;
    double sparsity_rate = 0.0;
    double mean = 0.0;  ///< NaN when every replicate failed
    double std = 0.0;
    std::size_t replicate_count = 0;
    std::size_t failure_count = 0;
    /// Lyapunov cells only: the length breaks the samples-per-dimension rule.
    bool short_series = false;
    /// Lyapunov cells only: replicates whose realized sparsity exceeds the ceiling.
    std::size_t high_sparsity_count = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;  ///< length-major, then rate, in spec order

    [[nodiscard]] const SweepCell* find(std::size_t length, double rate) const noexcept;
};

/// Replicate r of every cell uses seed base_seed + r for generation and an
/// independent sub-stream of that seed for sparsification.
[[nodiscard]] SweepResult run_sweep(const SweepSpec& spec, Parallelism par = {});

struct ReplicateOutcome {
    std::optional<double> value;  ///< nullopt when estimation was impossible
    double sparsity = 0.0;        ///< realized zero fraction of the evaluated series
};

[[nodiscard]] ReplicateOutcome evaluate_replicate(const SweepSpec& spec, std::size_t length,
                                                       double rate, std::size_t replicate);

struct SegmentConfig {
    WindowPlan omega_plan{200, 1};
    WindowPlan lambda_plan{300, 1};
    spectral::SpectralConfig spectral{};
    lyapunov::EmbeddingConfig embedding{};
};

struct SegmentSummary {
    std::string name;
    std::size_t begin = 0;
    std::size_t end = 0;
    Summary omega;
    Summary lambda;
    std::size_t lambda_gaps = 0;
};

struct BoundarySummary {
    std::size_t index = 0;  ///< first sample of the following segment
    Summary omega;
    Summary lambda;
    std::size_t lambda_gaps = 0;
};

struct SegmentReport {
    std::vector<SegmentSummary> segments;
    std::vector<BoundarySummary> boundaries;
    MovingSeries omega;
    MovingSeries lambda;
};

/// Moving Omega and lambda, summarized over windows lying entirely inside
/// each segment and, separately, over windows straddling each boundary.
[[nodiscard]] SegmentReport segment_metrics(const synth::Benchmark& benchmark, const SegmentConfig& config = {},
                                            Parallelism par = {});

}  // namespace fcast::experiments
