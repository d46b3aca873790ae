#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "forecastability/parallel.hpp"
#include "forecastability/timeseries.hpp"

namespace fcast::lyapunov {

/// Delay-embedded states stored row-major: state t is
/// (y_t, y_{t+tau}, ..., y_{t+(m-1)tau}).
class Embedding {
public:
    Embedding(std::size_t dim, std::vector<double> data);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
    [[nodiscard]] std::span<const double> state(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * dim_, dim_);
    }
    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// n = T - (m-1) tau states. Throws embedding_infeasible when n < 1.
[[nodiscard]] Embedding delay_embed(std::span<const double> values, std::size_t dim, std::size_t delay);
[[nodiscard]] Embedding delay_embed(const TimeSeries& series, std::size_t dim, std::size_t delay);

/// Squared Euclidean distance, summed in coordinate order. Both neighbor
/// search paths rank candidates by exactly this value.
[[nodiscard]] double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

enum class NeighborSearch { exhaustive, kd_tree };

[[nodiscard]] std::string_view to_string(NeighborSearch s) noexcept;

/// Admissibility rule shared by all search paths: j is a candidate for i when
/// |i - j| > theiler_window and distance >= distance_floor. Among candidates
/// the smallest squared distance wins, ties to the smallest j.
struct NeighborQuery {
    std::size_t theiler_window = 0;
    double distance_floor = 1e-12;
};

/// Exhaustive search over all states of `states`.
[[nodiscard]] std::optional<std::size_t> nearest_neighbor(const Embedding& states, std::size_t index,
                                                          std::size_t theiler_window,
                                                          double distance_floor);

/// Nearest admissible neighbor for every one of the first `count` states,
/// searching among those same states.
[[nodiscard]] std::vector<std::optional<std::size_t>> all_nearest_neighbors(
    const Embedding& states, std::size_t count, const NeighborQuery& query, NeighborSearch search,
    Parallelism par = {});

enum class Norm { euclidean };

struct EmbeddingConfig {
    std::size_t embedding_dim = 3;
    std::size_t delay = 1;
    std::size_t horizon = 5;
    /// Defaults to embedding_dim * delay when unset.
    std::optional<std::size_t> theiler_window;
    double distance_floor = 1e-12;
    Norm norm = Norm::euclidean;
    NeighborSearch search = NeighborSearch::kd_tree;

    [[nodiscard]] std::size_t effective_theiler() const noexcept {
        return theiler_window.value_or(embedding_dim * delay);
    }
    /// Throws invalid_config on m < 2, delay < 1, horizon < 1, floor <= 0.
    void validate() const;
};

enum class Sufficiency { ok, short_series, high_sparsity };

[[nodiscard]] std::string_view to_string(Sufficiency s) noexcept;

/// Minimum samples per embedding dimension, and the sparsity ceiling, for a
/// trustworthy estimate.
inline constexpr std::size_t kSamplesPerDimension = 100;
inline constexpr double kMaxSparsity = 0.7;

[[nodiscard]] Sufficiency sufficiency_check(std::span<const double> values, const EmbeddingConfig& config);
[[nodiscard]] Sufficiency sufficiency_check(const TimeSeries& series, const EmbeddingConfig& config);

struct LyapunovEstimate {
    double lambda = 0.0;  ///< per sample step, natural log
    std::size_t pair_count = 0;
    std::size_t skipped_pairs = 0;
    Sufficiency sufficiency = Sufficiency::ok;
};

/// One reference state and its neighbor, followed `horizon` steps ahead.
struct DivergencePair {
    std::size_t state;
    std::size_t neighbor;
    double initial_distance;
    double final_distance;
    bool skipped;  ///< final distance fell below the floor
};

/// Every admissible pair in reference-state order; useful for auditing the
/// estimator (Theiler exclusion, skip accounting).
[[nodiscard]] std::vector<DivergencePair> divergence_pairs(std::span<const double> values,
                                                           const EmbeddingConfig& config,
                                                           Parallelism par = {});

/// Mean over pairs of log(delta(horizon) / delta_0) / horizon.
/// Throws estimation_impossible when no pair survives.
[[nodiscard]] LyapunovEstimate largest_lyapunov(std::span<const double> values,
                                                const EmbeddingConfig& config = {},
                                                Parallelism par = {});
[[nodiscard]] LyapunovEstimate largest_lyapunov(const TimeSeries& series,
                                                const EmbeddingConfig& config = {},
                                                Parallelism par = {});

/// Smallest window that can produce an estimate: (m-1) tau + horizon + 2.
[[nodiscard]] std::size_t minimum_window(const EmbeddingConfig& config) noexcept;

/// Lambda per window stamped at the window end; windows with no admissible
/// pair are gaps.
[[nodiscard]] MovingSeries moving_lyapunov(const TimeSeries& series, const WindowPlan& plan,
                                           const EmbeddingConfig& config = {}, Parallelism par = {});

}  // namespace fcast::lyapunov
