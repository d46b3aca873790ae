#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "forecastability/timeseries.hpp"

namespace fcast::synth {

struct SineComponent {
    double frequency;  ///< cycles per sample, in (0, 0.5)
    double amplitude = 1.0;
    double phase = 0.0;
};

enum class Coordinate { x, y, z };

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    double dt = 0.01;  ///< RK4 step
    std::array<double, 3> initial_state{1.0, 1.0, 1.0};
    std::size_t transient_steps = 1000;
    Coordinate observed_coordinate = Coordinate::x;
    /// RK4 steps between emitted samples; the sampling interval is dt * sample_every.
    std::size_t sample_every = 1;
};

using LorenzState = std::array<double, 3>;

[[nodiscard]] LorenzState lorenz_derivative(const LorenzState& s, const LorenzParams& p) noexcept;

/// One classical fourth-order Runge-Kutta step of size h.
[[nodiscard]] LorenzState rk4_step(const LorenzState& s, const LorenzParams& p, double h) noexcept;

/// Full states after the transient, one per emitted sample.
[[nodiscard]] std::vector<LorenzState> integrate_lorenz(std::size_t samples, const LorenzParams& params);

[[nodiscard]] TimeSeries gen_sine(std::size_t length, double frequency, double amplitude = 1.0,
                                  double phase = 0.0);
[[nodiscard]] TimeSeries gen_multisine(std::size_t length, const std::vector<SineComponent>& components);
[[nodiscard]] TimeSeries add_gaussian_noise(const TimeSeries& series, double sigma, std::uint64_t seed);
[[nodiscard]] TimeSeries gen_lorenz(std::size_t length, const LorenzParams& params = {});
[[nodiscard]] TimeSeries gen_white_noise(std::size_t length, double sigma, std::uint64_t seed);

/// Zeroes exactly floor(rate * T) distinct positions chosen uniformly.
[[nodiscard]] TimeSeries sparsify(const TimeSeries& series, double rate, std::uint64_t seed);

/// Zeroes exactly `count` (<= T) distinct positions chosen uniformly.
[[nodiscard]] TimeSeries zero_random_positions(const TimeSeries& series, std::size_t count, std::uint64_t seed);

/// Shifts and scales to zero mean and unit (population) variance; constant
/// input is only centered.
[[nodiscard]] std::vector<double> standardize(std::span<const double> values);

enum class SignalKind { sine, multisine, noisy_multisine, lorenz, white_noise };

[[nodiscard]] std::string_view to_string(SignalKind k) noexcept;

/// Default mixture: harmonics 1, 3, 7 of a 128-sample period.
[[nodiscard]] std::vector<SineComponent> default_multisine();

struct SignalParams {
    /// Empty means the kind's default: a 0.0123-cycle unit sine, or default_multisine().
    std::vector<SineComponent> components;
    double noise_sigma = 0.6;
    LorenzParams lorenz{};
    double sigma = 1.0;
};

/// Declarative description of one generated series. Identical specs give
/// bit-identical output.
struct SignalSpec {
    SignalKind kind = SignalKind::sine;
    std::size_t length = 256;
    std::uint64_t seed = 0;
    SignalParams params{};
};

/// Sine uses only the first component.
[[nodiscard]] TimeSeries generate(const SignalSpec& spec);

/// Copy of `spec` with per-replicate variation derived from `seed`: every
/// sine phase is redrawn in [0, 2 pi), the Lorenz start point is offset by
/// uniform draws in [-0.5, 0.5]^3, and the noise seed is `seed`.
[[nodiscard]] SignalSpec randomized(const SignalSpec& spec, std::uint64_t seed);

struct BenchmarkSpec {
    std::size_t segment_length = 500;
    std::uint64_t seed = 0;
    double sine_frequency = 0.0123;
    std::vector<SineComponent> multisine = default_multisine();
    double noise_sigma = 0.6;
    LorenzParams lorenz{.sample_every = 10};
};

struct Benchmark {
    TimeSeries series;
    std::vector<std::size_t> boundaries;  ///< start of segments 2..5
    std::vector<std::string> segment_names;
};

/// [sine | multisine | noisy multisine | Lorenz | white noise], each segment
/// standardized before concatenation.
[[nodiscard]] Benchmark five_segment_benchmark(const BenchmarkSpec& spec);
[[nodiscard]] Benchmark five_segment_benchmark(std::size_t segment_length, std::uint64_t seed);

}  // namespace fcast::synth
