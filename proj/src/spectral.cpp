#include "forecastability/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "forecastability/error.hpp"

namespace fcast::spectral {
namespace {

constexpr std::size_t kMinLength = 4;
constexpr double kDegeneratePowerPerSample = 1e-30;

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

// FFTW's planner is not thread-safe; execution of an existing plan on new
// fftw_malloc'd arrays is. Plans are created once per length and kept.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan r2c(std::size_t n) {
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(n); it != plans_.end()) return it->second;
        auto in = fftw_alloc<double>(n);
        auto out = fftw_alloc<fftw_complex>(n / 2 + 1);
        fftw_plan plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
        plans_.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void require_length(std::size_t n) {
    if (n < kMinLength) {
        throw Error(Errc::series_too_short, "spectral analysis needs at least 4 samples, got " +
                                                std::to_string(n));
    }
}

}  // namespace

PowerDistribution PowerDistribution::from_power(std::vector<double> power, double degenerate_threshold) {
    double total = 0.0;
    for (double p : power) total += p;
    PowerDistribution dist;
    if (!(total > degenerate_threshold) || total <= 0.0) {
        dist.masses = std::move(power);
        dist.degenerate = true;
        return dist;
    }
    for (double& p : power) p /= total;
    dist.masses = std::move(power);
    return dist;
}

PowerDistribution PowerDistribution::uniform(std::size_t bins) {
    if (bins == 0) throw Error(Errc::degenerate_input, "a distribution needs at least one bin");
    return {std::vector<double>(bins, 1.0 / static_cast<double>(bins)), false};
}

std::vector<double> hann_window(std::size_t n) {
    if (n == 0) throw Error(Errc::degenerate_input, "Hann window length must be at least 1");
    if (n == 1) return {1.0};
    std::vector<double> w(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / denom));
    }
    return w;
}

std::vector<double> one_sided_power(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw Error(Errc::degenerate_input, "cannot transform an empty sequence");
    const fftw_plan plan = plan_cache().r2c(n);
    auto in = fftw_alloc<double>(n);
    auto out = fftw_alloc<fftw_complex>(n / 2 + 1);
    std::copy(values.begin(), values.end(), in.get());
    fftw_execute_dft_r2c(plan, in.get(), out.get());

    std::vector<double> power(n / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    }
    return power;
}

PowerDistribution power_distribution(std::span<const double> values, const SpectralConfig& config) {
    const std::size_t n = values.size();
    require_length(n);

    std::vector<double> work = config.apply_detrend ? detrend_linear(values)
                                                    : std::vector<double>(values.begin(), values.end());
    if (config.apply_hann) {
        const auto taper = hann_window(n);
        for (std::size_t k = 0; k < n; ++k) work[k] *= taper[k];
    }

    auto power = one_sided_power(work);
    if (!config.include_dc) power.erase(power.begin());
    return PowerDistribution::from_power(std::move(power),
                                         kDegeneratePowerPerSample * static_cast<double>(n));
}

PowerDistribution power_distribution(const TimeSeries& series, const SpectralConfig& config) {
    return power_distribution(series.values(), config);
}

double spectral_entropy(const PowerDistribution& dist, double log_base) {
    if (dist.degenerate) throw Error(Errc::degenerate_spectrum, "entropy of a zero-power spectrum");
    if (!(log_base > 1.0)) throw Error(Errc::invalid_config, "logarithm base must exceed 1");
    double h = 0.0;
    for (double p : dist.masses) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::max(0.0, h / std::log(log_base));
}

double predictability_of(const PowerDistribution& dist, double log_base) {
    if (dist.degenerate) return 1.0;
    const std::size_t bins = dist.bin_count();
    if (bins < 2) return 1.0;
    const double h = spectral_entropy(dist, log_base);
    const double h_max = std::log(static_cast<double>(bins)) / std::log(log_base);
    return std::clamp(1.0 - h / h_max, 0.0, 1.0);
}

double predictability_log2pi(const PowerDistribution& dist, double log_base) {
    if (dist.degenerate) return 1.0;
    const double h = spectral_entropy(dist, log_base);
    return 1.0 - h / (std::log(2.0 * std::numbers::pi) / std::log(log_base));
}

double spectral_predictability(std::span<const double> values, const SpectralConfig& config) {
    return predictability_of(power_distribution(values, config), config.log_base);
}

double spectral_predictability(const TimeSeries& series, const SpectralConfig& config) {
    return spectral_predictability(series.values(), config);
}

MovingSeries moving_spectral_predictability(const TimeSeries& series, const WindowPlan& plan,
                                            const SpectralConfig& config, Parallelism par) {
    require_length(plan.window_size);
    const auto windows = iterate_windows(series, plan);
    MovingSeries out;
    out.stamps.reserve(windows.size());
    for (const auto& w : windows) out.stamps.push_back(w.stamp);
    out.values.resize(windows.size());
    parallel_for(windows.size(), par, [&](std::size_t k) {
        out.values[k] = spectral_predictability(windows[k].values, config);
    });
    return out;
}

}  // namespace fcast::spectral
