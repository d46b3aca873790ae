#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "forecastability/parallel.hpp"
#include "forecastability/timeseries.hpp"

namespace fcast::spectral {

struct SpectralConfig {
    double log_base = std::numbers::e;  ///< any base > 1
    bool apply_hann = true;
    bool apply_detrend = true;
    bool include_dc = false;
};

/// Normalized one-sided power masses. A degenerate distribution (zero total
/// power) keeps its raw, all-but-zero masses and must not be fed to entropy.
struct PowerDistribution {
    std::vector<double> masses;
    bool degenerate = false;

    [[nodiscard]] std::size_t bin_count() const noexcept { return masses.size(); }

    /// Normalizes raw non-negative powers. Flags degenerate when the total is
    /// below `degenerate_threshold`.
    [[nodiscard]] static PowerDistribution from_power(std::vector<double> power,
                                                      double degenerate_threshold = 0.0);
    [[nodiscard]] static PowerDistribution uniform(std::size_t bins);
};

/// Symmetric Hann taper, w_k = 0.5 (1 - cos(2 pi k / (n - 1))); [1.0] for n = 1.
[[nodiscard]] std::vector<double> hann_window(std::size_t n);

/// Squared magnitudes |X_k|^2 for k = 0..floor(n/2) of the real DFT.
[[nodiscard]] std::vector<double> one_sided_power(std::span<const double> values);

/// detrend -> Hann -> DFT -> |X_k|^2 over bins 1..floor(T/2) (0..floor(T/2)
/// with include_dc), normalized. Requires T >= 4.
[[nodiscard]] PowerDistribution power_distribution(std::span<const double> values,
                                                   const SpectralConfig& config = {});
[[nodiscard]] PowerDistribution power_distribution(const TimeSeries& series,
                                                   const SpectralConfig& config = {});

/// H_a = -sum p log_a p over nonzero masses. Throws degenerate_spectrum.
[[nodiscard]] double spectral_entropy(const PowerDistribution& dist, double log_base);

/// Omega = 1 - H_a / log_a(N), clamped to [0, 1]; 1 for a degenerate spectrum.
[[nodiscard]] double predictability_of(const PowerDistribution& dist, double log_base);

/// 1 - H / log(2 pi): the continuous-spectrum normalizer. Not bounded for
/// more than six bins; reported only as a diagnostic.
[[nodiscard]] double predictability_log2pi(const PowerDistribution& dist, double log_base);

[[nodiscard]] double spectral_predictability(std::span<const double> values,
                                             const SpectralConfig& config = {});
[[nodiscard]] double spectral_predictability(const TimeSeries& series,
                                             const SpectralConfig& config = {});

/// Omega per window, stamped at the window end. Requires 4 <= W <= T.
[[nodiscard]] MovingSeries moving_spectral_predictability(const TimeSeries& series,
                                                          const WindowPlan& plan,
                                                          const SpectralConfig& config = {},
                                                          Parallelism par = {});

}  // namespace fcast::spectral
