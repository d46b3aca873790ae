#include "forecastability/timeseries.hpp"

#include <algorithm>
#include <cmath>

#include "forecastability/error.hpp"

namespace fcast {

std::string_view to_string(Frequency f) noexcept {
    switch (f) {
        case Frequency::daily: return "daily";
        case Frequency::weekly: return "weekly";
        case Frequency::unitless: return "unitless";
    }
    return "unitless";
}

std::optional<Frequency> parse_frequency(std::string_view text) noexcept {
    if (text == "daily") return Frequency::daily;
    if (text == "weekly") return Frequency::weekly;
    if (text == "unitless") return Frequency::unitless;
    return std::nullopt;
}

TimeSeries::TimeSeries(std::string id, std::vector<double> values, std::int64_t start_index,
                       Frequency frequency)
    : id_(std::move(id)), values_(std::move(values)), start_index_(start_index), frequency_(frequency) {
    if (values_.empty()) throw Error(Errc::degenerate_input, "series '" + id_ + "' is empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(Errc::non_finite,
                        "series '" + id_ + "' has a non-finite value at position " + std::to_string(i));
        }
    }
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
    return TimeSeries(id_, std::move(values), start_index_, frequency_);
}

std::size_t WindowPlan::window_count(std::size_t series_length) const {
    if (window_size == 0) throw Error(Errc::degenerate_input, "window size must be at least 1");
    if (stride == 0) throw Error(Errc::degenerate_input, "stride must be at least 1");
    if (window_size > series_length) {
        throw Error(Errc::window_too_large, "window of " + std::to_string(window_size) +
                                                " exceeds series length " + std::to_string(series_length));
    }
    return (series_length - window_size) / stride + 1;
}

std::size_t MovingSeries::gap_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](const auto& v) { return !v.has_value(); }));
}

std::vector<double> detrend_linear(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw Error(Errc::degenerate_input, "detrending needs at least 2 samples");

    // Work relative to the first sample so a constant input yields exact zeros.
    const double origin = values[0];
    const double t_mean = static_cast<double>(n - 1) / 2.0;
    double y_mean = 0.0;
    for (double v : values) y_mean += v - origin;
    y_mean /= static_cast<double>(n);

    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        sxy += dt * ((values[t] - origin) - y_mean);
        sxx += dt * dt;
    }
    const double slope = sxy / sxx;

    std::vector<double> residuals(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        residuals[t] = ((values[t] - origin) - y_mean) - slope * dt;
    }
    return residuals;
}

TimeSeries detrend_linear(const TimeSeries& series) {
    return series.with_values(detrend_linear(series.values()));
}

double sparsity_of(std::span<const double> values) noexcept {
    if (values.empty()) return 0.0;
    const auto zeros = std::count(values.begin(), values.end(), 0.0);
    return static_cast<double>(zeros) / static_cast<double>(values.size());
}

double sparsity_of(const TimeSeries& series) noexcept { return sparsity_of(series.values()); }

TimeSeries resample_weekly(const TimeSeries& series) {
    if (series.frequency() != Frequency::daily) {
        throw Error(Errc::invalid_frequency, "weekly resampling needs a daily series, '" + series.id() +
                                                 "' is " + std::string(to_string(series.frequency())));
    }
    if (series.size() < 7) {
        throw Error(Errc::degenerate_input, "series '" + series.id() + "' is shorter than one week");
    }
    const std::size_t weeks = series.size() / 7;
    std::vector<double> sums(weeks, 0.0);
    for (std::size_t w = 0; w < weeks; ++w) {
        for (std::size_t d = 0; d < 7; ++d) sums[w] += series[w * 7 + d];
    }
    // Week k covers days start + 7k .. start + 7k + 6; its ordinal is start/7 + k.
    return TimeSeries(series.id(), std::move(sums), series.start_index() / 7, Frequency::weekly);
}

std::vector<SeriesWindow> iterate_windows(const TimeSeries& series, const WindowPlan& plan) {
    const std::size_t count = plan.window_count(series.size());
    std::vector<SeriesWindow> windows;
    windows.reserve(count);
    const auto values = series.values();
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t offset = k * plan.stride;
        windows.push_back({offset,
                           series.start_index() + static_cast<std::int64_t>(offset + plan.window_size - 1),
                           values.subspan(offset, plan.window_size)});
    }
    return windows;
}

}  // namespace fcast
