#include "forecastability/synth.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "forecastability/error.hpp"
#include "forecastability/random.hpp"

namespace fcast::synth {
namespace {

constexpr double kDefaultSineFrequency = 0.0123;
constexpr std::uint64_t kWhiteNoiseStream = 0x7768697465ULL;

void check_frequency(double f) {
    if (!(f > 0.0 && f < 0.5)) {
        throw Error(Errc::aliasing, "frequency " + std::to_string(f) + " is outside (0, 0.5) cycles/sample");
    }
}

// sin(2 pi f t + phase) with the cycle count reduced first, so periodic
// signals with dyadic frequencies repeat exactly.
double sine_sample(double frequency, double amplitude, double phase, std::size_t t) {
    const double cycles = std::fmod(frequency * static_cast<double>(t), 1.0);
    return amplitude * std::sin(2.0 * std::numbers::pi * cycles + phase);
}

}  // namespace

LorenzState lorenz_derivative(const LorenzState& s, const LorenzParams& p) noexcept {
    return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

LorenzState rk4_step(const LorenzState& s, const LorenzParams& p, double h) noexcept {
    auto offset = [](const LorenzState& a, const LorenzState& k, double c) {
        return LorenzState{a[0] + c * k[0], a[1] + c * k[1], a[2] + c * k[2]};
    };
    const LorenzState k1 = lorenz_derivative(s, p);
    const LorenzState k2 = lorenz_derivative(offset(s, k1, h / 2.0), p);
    const LorenzState k3 = lorenz_derivative(offset(s, k2, h / 2.0), p);
    const LorenzState k4 = lorenz_derivative(offset(s, k3, h), p);
    LorenzState next;
    for (std::size_t i = 0; i < 3; ++i) next[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return next;
}

std::vector<LorenzState> integrate_lorenz(std::size_t samples, const LorenzParams& params) {
    if (!(params.dt > 0.0)) throw Error(Errc::invalid_config, "Lorenz dt must be positive");
    if (params.sample_every == 0) throw Error(Errc::invalid_config, "Lorenz sample_every must be at least 1");

    LorenzState state = params.initial_state;
    auto advance = [&](std::size_t steps) {
        for (std::size_t k = 0; k < steps; ++k) {
            state = rk4_step(state, params, params.dt);
            if (!std::isfinite(state[0]) || !std::isfinite(state[1]) || !std::isfinite(state[2])) {
                throw Error(Errc::divergence, "Lorenz integration left the finite range");
            }
        }
    };
    advance(params.transient_steps);

    std::vector<LorenzState> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        if (i > 0) advance(params.sample_every);
        out.push_back(state);
    }
    return out;
}

TimeSeries gen_sine(std::size_t length, double frequency, double amplitude, double phase) {
    if (length == 0) throw Error(Errc::degenerate_input, "length must be at least 1");
    check_frequency(frequency);
    std::vector<double> y(length);
    for (std::size_t t = 0; t < length; ++t) y[t] = sine_sample(frequency, amplitude, phase, t);
    return TimeSeries("sine", std::move(y));
}

TimeSeries gen_multisine(std::size_t length, const std::vector<SineComponent>& components) {
    if (length == 0) throw Error(Errc::degenerate_input, "length must be at least 1");
    if (components.empty()) throw Error(Errc::degenerate_input, "multisine needs at least one component");
    for (const auto& c : components) check_frequency(c.frequency);
    std::vector<double> y(length, 0.0);
    for (const auto& c : components) {
        for (std::size_t t = 0; t < length; ++t) y[t] += sine_sample(c.frequency, c.amplitude, c.phase, t);
    }
    return TimeSeries("multisine", std::move(y));
}

TimeSeries add_gaussian_noise(const TimeSeries& series, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw Error(Errc::invalid_config, "noise sigma must be non-negative");
    if (sigma == 0.0) return series;
    Rng rng(seed);
    std::vector<double> y(series.values().begin(), series.values().end());
    for (double& v : y) v += sigma * rng.normal();
    return series.with_values(std::move(y));
}

TimeSeries gen_lorenz(std::size_t length, const LorenzParams& params) {
    if (length == 0) throw Error(Errc::degenerate_input, "length must be at least 1");
    const auto states = integrate_lorenz(length, params);
    const auto coord = static_cast<std::size_t>(params.observed_coordinate);
    std::vector<double> y(length);
    for (std::size_t i = 0; i < length; ++i) y[i] = states[i][coord];
    return TimeSeries("lorenz", std::move(y));
}

TimeSeries gen_white_noise(std::size_t length, double sigma, std::uint64_t seed) {
    if (length == 0) throw Error(Errc::degenerate_input, "length must be at least 1");
    if (!(sigma > 0.0)) throw Error(Errc::invalid_config, "white noise sigma must be positive");
    Rng rng(seed);
    std::vector<double> y(length);
    for (double& v : y) v = sigma * rng.normal();
    return TimeSeries("white_noise", std::move(y));
}

TimeSeries sparsify(const TimeSeries& series, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate < 1.0)) throw Error(Errc::invalid_config, "sparsity rate must be in [0, 1)");
    const auto k = static_cast<std::size_t>(std::floor(rate * static_cast<double>(series.size())));
    return zero_random_positions(series, k, seed);
}

TimeSeries zero_random_positions(const TimeSeries& series, std::size_t k, std::uint64_t seed) {
    const std::size_t n = series.size();
    if (k > n) throw Error(Errc::invalid_config, "cannot zero more positions than the series has");
    if (k == 0) return series;

    // Partial Fisher-Yates: the first k slots of `order` are a uniform
    // k-subset of positions.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(order[i], order[j]);
    }
    std::vector<double> y(series.values().begin(), series.values().end());
    for (std::size_t i = 0; i < k; ++i) y[order[i]] = 0.0;
    return series.with_values(std::move(y));
}

std::vector<double> standardize(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    if (out.empty()) return out;
    const double n = static_cast<double>(out.size());
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / n;
    double ss = 0.0;
    for (double& v : out) {
        v -= mean;
        ss += v * v;
    }
    const double sd = std::sqrt(ss / n);
    if (sd > 0.0) {
        for (double& v : out) v /= sd;
    }
    return out;
}

std::string_view to_string(SignalKind k) noexcept {
    switch (k) {
        case SignalKind::sine: return "sine";
        case SignalKind::multisine: return "multisine";
        case SignalKind::noisy_multisine: return "noisy_multisine";
        case SignalKind::lorenz: return "lorenz";
        case SignalKind::white_noise: return "white_noise";
    }
    return "sine";
}

std::vector<SineComponent> default_multisine() {
    return {{1.0 / 128.0, 1.0, 0.0}, {3.0 / 128.0, 0.7, 0.0}, {7.0 / 128.0, 0.4, 0.0}};
}

TimeSeries generate(const SignalSpec& spec) {
    const auto& p = spec.params;
    auto components = [&](bool single) {
        if (p.components.empty()) {
            return single ? std::vector<SineComponent>{{kDefaultSineFrequency, 1.0, 0.0}} : default_multisine();
        }
        return single ? std::vector<SineComponent>{p.components.front()} : p.components;
    };
    switch (spec.kind) {
        case SignalKind::sine: {
            const auto c = components(true).front();
            return gen_sine(spec.length, c.frequency, c.amplitude, c.phase);
        }
        case SignalKind::multisine:
            return gen_multisine(spec.length, components(false));
        case SignalKind::noisy_multisine:
            return add_gaussian_noise(gen_multisine(spec.length, components(false)), p.noise_sigma,
                                      derive_seed(spec.seed, streams::noise));
        case SignalKind::lorenz:
            return gen_lorenz(spec.length, p.lorenz);
        case SignalKind::white_noise:
            return gen_white_noise(spec.length, p.sigma, spec.seed);
    }
    throw Error(Errc::invalid_config, "unknown signal kind");
}

SignalSpec randomized(const SignalSpec& spec, std::uint64_t seed) {
    SignalSpec out = spec;
    out.seed = seed;
    if (out.params.components.empty()) {
        out.params.components = spec.kind == SignalKind::sine
                                    ? std::vector<SineComponent>{{kDefaultSineFrequency, 1.0, 0.0}}
                                    : default_multisine();
    }
    Rng phases(derive_seed(seed, streams::phases));
    for (auto& c : out.params.components) c.phase = phases.uniform(0.0, 2.0 * std::numbers::pi);
    Rng start(derive_seed(seed, streams::initial_state));
    for (auto& x : out.params.lorenz.initial_state) x += start.uniform(-0.5, 0.5);
    return out;
}

Benchmark five_segment_benchmark(const BenchmarkSpec& spec) {
    const std::size_t len = spec.segment_length;
    if (len == 0) throw Error(Errc::degenerate_input, "segment length must be at least 1");

    Rng phases(derive_seed(spec.seed, streams::phases));
    auto draw_phase = [&] { return phases.uniform(0.0, 2.0 * std::numbers::pi); };

    const TimeSeries sine = gen_sine(len, spec.sine_frequency, 1.0, draw_phase());
    auto components = spec.multisine;
    for (auto& c : components) c.phase = draw_phase();
    const TimeSeries multi = gen_multisine(len, components);
    const TimeSeries noisy = add_gaussian_noise(multi, spec.noise_sigma, derive_seed(spec.seed, streams::noise));

    LorenzParams lorenz = spec.lorenz;
    Rng start(derive_seed(spec.seed, streams::initial_state));
    for (auto& x : lorenz.initial_state) x += start.uniform(-0.5, 0.5);
    const TimeSeries chaos = gen_lorenz(len, lorenz);
    const TimeSeries noise = gen_white_noise(len, 1.0, derive_seed(spec.seed, kWhiteNoiseStream));

    std::vector<double> all;
    all.reserve(5 * len);
    Benchmark out{TimeSeries("benchmark", {0.0}), {}, {"sine", "multisine", "noisy_multisine", "lorenz",
                                                       "white_noise"}};
    for (const TimeSeries* seg : {&sine, &multi, &noisy, &chaos, &noise}) {
        if (!all.empty()) out.boundaries.push_back(all.size());
        const auto z = standardize(seg->values());
        all.insert(all.end(), z.begin(), z.end());
    }
    out.series = TimeSeries("benchmark", std::move(all));
    return out;
}

Benchmark five_segment_benchmark(std::size_t segment_length, std::uint64_t seed) {
    BenchmarkSpec spec;
    spec.segment_length = segment_length;
    spec.seed = seed;
    return five_segment_benchmark(spec);
}

}  // namespace fcast::synth
