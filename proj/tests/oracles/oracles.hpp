#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numerical code paths.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace oracle {

/// |X_k|^2 for k = 0..floor(n/2) by the O(n^2) DFT sum in long double.
std::vector<double> direct_dft_power(const std::vector<double>& y);

/// Residuals of the OLS line solved from the 2x2 normal equations.
std::vector<double> normal_equations_detrend(const std::vector<double>& y);

/// 0.5 (1 - cos(2 pi k / (n - 1))).
std::vector<double> hann(std::size_t n);

/// Power masses over bins 1..floor(T/2) after detrend and Hann, using the
/// functions above. Empty when the total power is zero.
std::vector<double> reference_masses(const std::vector<double>& y, bool detrend = true, bool taper = true);

/// 1 - H / log(N), 1 for an all-zero spectrum.
double reference_omega(const std::vector<double>& y, bool detrend = true, bool taper = true);

/// states[t][j] = y[t + j tau].
std::vector<std::vector<double>> brute_force_embed(const std::vector<double>& y, std::size_t m, std::size_t tau);

struct NaiveLyapunov {
    double lambda = 0.0;
    std::size_t pairs = 0;
    std::size_t skipped = 0;
};

/// Single-horizon divergence estimator written directly from its definition:
/// every state with a future `horizon` steps ahead picks its closest state
/// (Euclidean, outside the exclusion window, at least `floor` away, ties to
/// the lower index) among states that also have that future. nullopt when
/// no pair survives.
std::optional<NaiveLyapunov> naive_lyapunov(const std::vector<double>& y, std::size_t m, std::size_t tau,
                                            std::size_t horizon, std::size_t theiler, double floor = 1e-12);

struct LorenzSystem {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

/// Largest Lyapunov exponent of the Lorenz flow per unit time by the
/// variational (Benettin) method: the tangent vector is propagated with the
/// Jacobian alongside the state, both by RK4, and renormalized every step.
double benettin_lorenz(const LorenzSystem& sys, std::array<double, 3> x0, double dt, std::size_t transient_steps,
                       std::size_t steps);

}  // namespace oracle
