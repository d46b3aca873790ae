#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fcast {

enum class Frequency { daily, weekly, unitless };

[[nodiscard]] std::string_view to_string(Frequency f) noexcept;
[[nodiscard]] std::optional<Frequency> parse_frequency(std::string_view text) noexcept;

/// Uniformly sampled, finite-valued series. Immutable after construction.
class TimeSeries {
public:
    /// Throws Error(degenerate_input) when empty, Error(non_finite) on NaN/inf.
    TimeSeries(std::string id, std::vector<double> values, std::int64_t start_index = 0,
               Frequency frequency = Frequency::unitless);

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::int64_t start_index() const noexcept { return start_index_; }
    [[nodiscard]] Frequency frequency() const noexcept { return frequency_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Same identity and metadata, different values.
    [[nodiscard]] TimeSeries with_values(std::vector<double> values) const;

private:
    std::string id_;
    std::vector<double> values_;
    std::int64_t start_index_;
    Frequency frequency_;
};

enum class WindowAlignment { window_end };

struct WindowPlan {
    std::size_t window_size = 0;
    std::size_t stride = 1;
    WindowAlignment alignment = WindowAlignment::window_end;

    /// floor((T - W) / stride) + 1. Throws window_too_large when W > T and
    /// degenerate_input when W or stride is zero.
    [[nodiscard]] std::size_t window_count(std::size_t series_length) const;
};

/// Contiguous slice of a series. `values` borrows from the source series.
struct SeriesWindow {
    std::size_t offset;
    std::int64_t stamp;  ///< index of the window's last sample
    std::span<const double> values;
};

/// Per-window metric values; a missing value marks a window where the
/// metric could not be estimated.
struct MovingSeries {
    std::vector<std::int64_t> stamps;
    std::vector<std::optional<double>> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] std::size_t gap_count() const noexcept;
};

/// Residuals of the least-squares line over indices 0..T-1. Requires T >= 2.
[[nodiscard]] std::vector<double> detrend_linear(std::span<const double> values);
[[nodiscard]] TimeSeries detrend_linear(const TimeSeries& series);

/// Fraction of entries that are exactly zero.
[[nodiscard]] double sparsity_of(std::span<const double> values) noexcept;
[[nodiscard]] double sparsity_of(const TimeSeries& series) noexcept;

/// Sums non-overlapping 7-sample blocks of a daily series; a trailing partial
/// block is dropped.
[[nodiscard]] TimeSeries resample_weekly(const TimeSeries& series);

[[nodiscard]] std::vector<SeriesWindow> iterate_windows(const TimeSeries& series,
                                                        const WindowPlan& plan);

}  // namespace fcast
